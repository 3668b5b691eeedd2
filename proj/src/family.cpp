#include "mcfill/family.hpp"

#include <algorithm>
#include <limits>

#include "mcfill/dyadic.hpp"
#include "mcfill/errors.hpp"

namespace mcfill {

namespace {

constexpr std::size_t kMaxTrieNodes = 8'000'000;

void check_ground(GroundKind kind, int element, int leaf_length) {
    switch (kind) {
        case GroundKind::Points:
            if (element < 0)
                throw InputError("point-ground element must be a nonnegative id, got " +
                                 std::to_string(element));
            break;
        case GroundKind::Naturals:
            if (element < 1)
                throw InputError("natural-ground element must be >= 1, got " +
                                 std::to_string(element));
            break;
        case GroundKind::Leaves:
            if (!is_valid_leaf(element, leaf_length))
                throw InputError("leaf-ground element " + std::to_string(element) +
                                 " is not a leaf code of length " + std::to_string(leaf_length));
            break;
    }
}

// Fallback cursor for families without an incremental test.
class DefaultCursor final : public MemberCursor {
public:
    explicit DefaultCursor(const HereditaryFamily& family) : family_(family) {}
    bool try_push(int element) override {
        current_.push_back(element);
        if (family_.contains(current_)) return true;
        current_.pop_back();
        return false;
    }
    void pop() override { current_.pop_back(); }

private:
    const HereditaryFamily& family_;
    std::vector<int> current_;
};

}  // namespace

std::unique_ptr<MemberCursor> HereditaryFamily::make_cursor() const {
    return std::make_unique<DefaultCursor>(*this);
}

// ---------------------------------------------------------------------------
// ExplicitFamily

ExplicitFamily::ExplicitFamily(const std::vector<std::vector<int>>& generators, GroundKind kind)
    : kind_(kind) {
    nodes_.emplace_back();
    for (const auto& gen : generators) {
        has_empty_ = true;
        std::vector<int> elems = normalized(gen);
        for (int e : elems) check_ground(kind_, e, 0);
        insert_closure(0, elems);
    }
}

int ExplicitFamily::child(int node, int element) const {
    const auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), element,
                               [](const auto& kv, int e) { return kv.first < e; });
    if (it == kids.end() || it->first != element) return -1;
    return it->second;
}

int ExplicitFamily::ensure_child(int node, int element) {
    auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), element,
                               [](const auto& kv, int e) { return kv.first < e; });
    if (it != kids.end() && it->first == element) return it->second;
    if (nodes_.size() >= kMaxTrieNodes)
        throw ResourceError("explicit family closure exceeds " + std::to_string(kMaxTrieNodes) +
                            " trie nodes");
    int idx = static_cast<int>(nodes_.size());
    nodes_[node].children.insert(it, {element, idx});
    nodes_.emplace_back();
    return idx;
}

void ExplicitFamily::insert_closure(int node, std::span<const int> elems) {
    for (std::size_t i = 0; i < elems.size(); ++i)
        insert_closure(ensure_child(node, elems[i]), elems.subspan(i + 1));
}

bool ExplicitFamily::contains_impl(std::span<const int> sorted_set) const {
    if (!is_sorted_unique(sorted_set)) throw InputError("family membership expects a sorted set");
    for (int e : sorted_set) check_ground(kind_, e, 0);
    if (sorted_set.empty()) return has_empty_;
    if (!has_empty_) return false;
    int node = 0;
    for (int e : sorted_set) {
        node = child(node, e);
        if (node < 0) return false;
    }
    return true;
}

namespace {

class ExplicitCursor final : public MemberCursor {
public:
    explicit ExplicitCursor(const ExplicitFamily& family) : family_(family) { stack_.push_back(0); }
    bool try_push(int element) override {
        int next = family_.child(stack_.back(), element);
        if (next < 0) return false;
        stack_.push_back(next);
        return true;
    }
    void pop() override { stack_.pop_back(); }

private:
    const ExplicitFamily& family_;
    std::vector<int> stack_;
};

}  // namespace

std::unique_ptr<MemberCursor> ExplicitFamily::make_cursor() const {
    if (!has_empty_) throw InvariantError("cursor over the empty family");
    return std::make_unique<ExplicitCursor>(*this);
}

// ---------------------------------------------------------------------------
// SchreierFamily

bool SchreierFamily::contains_impl(std::span<const int> sorted_set) const {
    if (!is_sorted_unique(sorted_set)) throw InputError("family membership expects a sorted set");
    for (int e : sorted_set) check_ground(GroundKind::Naturals, e, 0);
    return schreier_contains(sorted_set);
}

namespace {

class SchreierCursor final : public MemberCursor {
public:
    bool try_push(int element) override {
        check_ground(GroundKind::Naturals, element, 0);
        int anchor = (size_ == 0) ? element : first_;
        if (size_ + 1 > anchor) return false;
        if (size_ == 0) first_ = element;
        ++size_;
        return true;
    }
    void pop() override { --size_; }

private:
    int size_ = 0;
    int first_ = 0;
};

}  // namespace

std::unique_ptr<MemberCursor> SchreierFamily::make_cursor() const {
    return std::make_unique<SchreierCursor>();
}

// ---------------------------------------------------------------------------
// DyadicDFamily

DyadicDFamily::DyadicDFamily(int leaf_length) : length_(leaf_length) {
    if (leaf_length < 1 || leaf_length > kMaxLeafLength)
        throw InputError("leaf length must be in [1, " + std::to_string(kMaxLeafLength) + "]");
}

bool DyadicDFamily::contains_impl(std::span<const int> sorted_set) const {
    if (!is_sorted_unique(sorted_set)) throw InputError("family membership expects a sorted set");
    return dyadicD_contains(sorted_set, length_);
}

namespace {

// Incremental v-set: pushing a leaf adds its meets with the current
// leaves; a set of k distinct leaves always has exactly k-1 divergence
// nodes, so each push past the first adds exactly one node.
class DyadicCursor final : public MemberCursor {
public:
    explicit DyadicCursor(int length) : length_(length) {}

    bool try_push(int element) override {
        check_ground(GroundKind::Leaves, element, length_);
        if (std::find(leaves_.begin(), leaves_.end(), element) != leaves_.end())
            throw InputError("duplicate leaf pushed into the dyadic cursor");
        std::vector<int> added;
        for (int leaf : leaves_) {
            int node = node_meet(leaf, element);
            if (!set_contains(v_, node) &&
                std::find(added.begin(), added.end(), node) == added.end())
                added.push_back(node);
        }
        std::sort(added.begin(), added.end());
        if (leaves_.size() >= 1 && added.size() != 1)
            throw InvariantError("divergence set grew by " + std::to_string(added.size()));
        std::vector<int> merged = set_union(v_, added);
        if (!schreier_contains(merged)) return false;
        v_ = std::move(merged);
        leaves_.push_back(element);
        added_.push_back(std::move(added));
        return true;
    }

    void pop() override {
        v_ = set_difference(v_, added_.back());
        added_.pop_back();
        leaves_.pop_back();
    }

private:
    int length_;
    std::vector<int> leaves_;
    std::vector<int> v_;  // sorted node codes
    std::vector<std::vector<int>> added_;
};

}  // namespace

std::unique_ptr<MemberCursor> DyadicDFamily::make_cursor() const {
    return std::make_unique<DyadicCursor>(length_);
}

// ---------------------------------------------------------------------------
// PartitionFamily

PartitionFamily::PartitionFamily(std::vector<std::vector<int>> classes, GroundKind kind)
    : kind_(kind) {
    classes_.reserve(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<int> cls = normalized(classes[c]);
        for (int e : cls) {
            check_ground(kind_, e, 0);
            auto [it, fresh] = class_of_.emplace(e, static_cast<int>(c));
            if (!fresh)
                throw InputError("element " + std::to_string(e) + " appears in two classes");
        }
        classes_.push_back(std::move(cls));
    }
}

int PartitionFamily::class_of(int element) const {
    auto it = class_of_.find(element);
    return it == class_of_.end() ? -1 : it->second;
}

bool PartitionFamily::contains_impl(std::span<const int> sorted_set) const {
    if (!is_sorted_unique(sorted_set)) throw InputError("family membership expects a sorted set");
    for (int e : sorted_set) check_ground(kind_, e, 0);
    if (sorted_set.empty()) return !classes_.empty();
    int cls = class_of(sorted_set.front());
    if (cls < 0) return false;
    for (int e : sorted_set.subspan(1))
        if (class_of(e) != cls) return false;
    return true;
}

namespace {

class PartitionCursor final : public MemberCursor {
public:
    explicit PartitionCursor(const PartitionFamily& family) : family_(family) {}
    bool try_push(int element) override {
        int cls = family_.class_of(element);
        if (cls < 0) return false;
        if (size_ > 0 && cls != class_) return false;
        class_ = cls;
        ++size_;
        return true;
    }
    void pop() override { --size_; }

private:
    const PartitionFamily& family_;
    int size_ = 0;
    int class_ = -1;
};

class TrivialCursor final : public MemberCursor {
public:
    explicit TrivialCursor(int max_size) : max_size_(max_size) {}
    bool try_push(int) override {
        if (size_ >= max_size_) return false;
        ++size_;
        return true;
    }
    void pop() override { --size_; }

private:
    int size_ = 0;
    int max_size_;
};

}  // namespace

std::unique_ptr<MemberCursor> PartitionFamily::make_cursor() const {
    if (classes_.empty()) throw InvariantError("cursor over the empty family");
    return std::make_unique<PartitionCursor>(*this);
}

// ---------------------------------------------------------------------------
// ShiftedNaturalsFamily

ShiftedNaturalsFamily::ShiftedNaturalsFamily(std::unique_ptr<HereditaryFamily> base)
    : base_(std::move(base)) {
    if (base_->ground_kind() != GroundKind::Naturals)
        throw InputError("only naturals-ground families can be shifted onto points");
}

bool ShiftedNaturalsFamily::contains_impl(std::span<const int> sorted_set) const {
    for (int e : sorted_set) check_ground(GroundKind::Points, e, 0);
    std::vector<int> shifted(sorted_set.begin(), sorted_set.end());
    for (int& e : shifted) ++e;
    return base_->contains(shifted);
}

namespace {

class ShiftedCursor final : public MemberCursor {
public:
    explicit ShiftedCursor(std::unique_ptr<MemberCursor> base) : base_(std::move(base)) {}
    bool try_push(int element) override {
        check_ground(GroundKind::Points, element, 0);
        return base_->try_push(element + 1);
    }
    void pop() override { base_->pop(); }

private:
    std::unique_ptr<MemberCursor> base_;
};

}  // namespace

std::unique_ptr<MemberCursor> ShiftedNaturalsFamily::make_cursor() const {
    return std::make_unique<ShiftedCursor>(base_->make_cursor());
}

std::unique_ptr<MemberCursor> AllSubsetsFamily::make_cursor() const {
    return std::make_unique<TrivialCursor>(std::numeric_limits<int>::max());
}

SizeAtMostFamily::SizeAtMostFamily(int max_size, GroundKind kind)
    : max_size_(max_size), kind_(kind) {
    if (max_size < 0) throw InputError("sizeAtMost bound must be >= 0");
}

std::unique_ptr<MemberCursor> SizeAtMostFamily::make_cursor() const {
    return std::make_unique<TrivialCursor>(max_size_);
}

std::unique_ptr<HereditaryFamily> build_explicit(const std::vector<std::vector<int>>& members,
                                                 GroundKind kind) {
    return std::make_unique<ExplicitFamily>(members, kind);
}

bool is_compact_counterexample(const HereditaryFamily& family, std::span<const int> a) {
    std::vector<int> sorted(a.begin(), a.end());
    sorted = normalized(std::move(sorted));
    return family.contains(sorted);
}

// ---------------------------------------------------------------------------
// Subset searches

namespace {

struct NodeBudget {
    std::uint64_t used = 0;
    std::uint64_t cap;
    void tick() {
        if (++used > cap)
            throw ResourceError("member search exceeded " + std::to_string(cap) +
                                " nodes; raise the search cap");
    }
};

}  // namespace

std::optional<WeightedSelection> max_member_weight(const HereditaryFamily& family,
                                                   std::span<const int> h,
                                                   std::span<const Rational> weights,
                                                   const SearchLimits& limits) {
    if (h.size() != weights.size()) throw InputError("one weight per element required");
    if (!is_sorted_unique(h)) throw InputError("max_member_weight expects a sorted set");
    for (const Rational& w : weights)
        if (w < 0) throw InputError("weights must be nonnegative");
    if (!family.contains({})) return std::nullopt;

    auto cursor = family.make_cursor();
    NodeBudget budget{0, limits.max_nodes};
    WeightedSelection best{Rational(0), {}};
    std::vector<int> current;
    Rational weight = 0;

    auto dfs = [&](auto&& self, std::size_t from) -> void {
        for (std::size_t j = from; j < h.size(); ++j) {
            budget.tick();
            if (!cursor->try_push(h[j])) continue;
            current.push_back(h[j]);
            weight += weights[j];
            if (weight > best.value) best = {weight, current};
            self(self, j + 1);
            cursor->pop();
            current.pop_back();
            weight -= weights[j];
        }
    };
    dfs(dfs, 0);
    return best;
}

std::optional<std::vector<int>> max_member_size(const HereditaryFamily& family,
                                                std::span<const int> h,
                                                const SearchLimits& limits) {
    if (!is_sorted_unique(h)) throw InputError("max_member_size expects a sorted set");
    if (!family.contains({})) return std::nullopt;
    auto cursor = family.make_cursor();
    NodeBudget budget{0, limits.max_nodes};
    std::vector<int> best;
    std::vector<int> current;
    auto dfs = [&](auto&& self, std::size_t from) -> void {
        for (std::size_t j = from; j < h.size(); ++j) {
            // even taking everything left cannot beat the incumbent
            if (current.size() + (h.size() - j) <= best.size()) return;
            budget.tick();
            if (!cursor->try_push(h[j])) continue;
            current.push_back(h[j]);
            if (current.size() > best.size()) best = current;
            self(self, j + 1);
            cursor->pop();
            current.pop_back();
        }
    };
    dfs(dfs, 0);
    return best;
}

std::optional<std::vector<int>> find_member_of_size(const HereditaryFamily& family,
                                                    std::span<const int> h, int target,
                                                    const SearchLimits& limits) {
    if (!is_sorted_unique(h)) throw InputError("find_member_of_size expects a sorted set");
    if (target < 0) throw InputError("target size must be >= 0");
    if (!family.contains({})) return std::nullopt;
    if (target == 0) return std::vector<int>{};

    // cheap pass first: from each start position, greedily push whatever
    // the cursor accepts. Anything it builds is a member; for the common
    // rule families (size caps, min-anchored rules) the right start makes
    // this land directly on a witness.
    for (std::size_t start = 0; start + target <= h.size(); ++start) {
        auto cursor = family.make_cursor();
        std::vector<int> chain;
        for (std::size_t j = start; j < h.size(); ++j) {
            if (cursor->try_push(h[j])) {
                chain.push_back(h[j]);
                if (static_cast<int>(chain.size()) == target) return chain;
            }
        }
    }

    // complete search, hereditary pruning plus the reach bound
    auto cursor = family.make_cursor();
    NodeBudget budget{0, limits.max_nodes};
    std::vector<int> current;
    auto dfs = [&](auto&& self, std::size_t from) -> bool {
        for (std::size_t j = from; j < h.size(); ++j) {
            if (current.size() + (h.size() - j) < static_cast<std::size_t>(target)) return false;
            budget.tick();
            if (!cursor->try_push(h[j])) continue;
            current.push_back(h[j]);
            if (static_cast<int>(current.size()) == target) return true;
            if (self(self, j + 1)) return true;
            cursor->pop();
            current.pop_back();
        }
        return false;
    };
    if (!dfs(dfs, 0)) return std::nullopt;
    return current;
}

// ---------------------------------------------------------------------------
// Filling check

Verdict is_filling(const HereditaryFamily& family, std::span<const int> s,
                   const Rational& epsilon, const FillingOptions& options) {
    if (epsilon <= 0 || epsilon > 1) throw InputError("epsilon must satisfy 0 < epsilon <= 1");
    std::vector<int> ground(s.begin(), s.end());
    ground = normalized(std::move(ground));

    Verdict verdict;
    verdict.epsilon = epsilon;
    verdict.holds = true;
    verdict.value = 1;  // min over swept H of (max member size)/|H|
    verdict.certificate.kind = "filling-vacuous";

    std::uint64_t swept = 0;
    std::vector<int> h;
    bool have_ratio = false;

    auto consider = [&](const std::vector<int>& subset) -> bool {
        if (++swept > options.max_subsets)
            throw ResourceError("filling sweep exceeded " + std::to_string(options.max_subsets) +
                                " subsets; lower max_h or raise the cap");
        auto best = max_member_size(family, subset, options.search);
        int best_size = best ? static_cast<int>(best->size()) : 0;
        Rational ratio = Rational(best_size, static_cast<int>(subset.size()));
        if (!have_ratio || ratio < verdict.value) {
            have_ratio = true;
            verdict.value = ratio;
            verdict.certificate.kind = "filling-H";
            verdict.certificate.witness = subset;
        }
        if (ratio < epsilon) {
            verdict.holds = false;
            verdict.certificate.kind = "filling-H";
            verdict.certificate.witness = subset;
            verdict.value = ratio;
            return false;  // first violation in sweep order is the certificate
        }
        return true;
    };

    int max_h = std::min<int>(options.max_h, static_cast<int>(ground.size()));
    auto sweep = [&](auto&& self, std::size_t from) -> bool {
        if (!h.empty() && !consider(h)) return false;
        if (static_cast<int>(h.size()) == max_h) return true;
        for (std::size_t j = from; j < ground.size(); ++j) {
            h.push_back(ground[j]);
            bool keep_going = self(self, j + 1);
            h.pop_back();
            if (!keep_going) return false;
        }
        return true;
    };
    sweep(sweep, 0);
    return verdict;
}

}  // namespace mcfill
