#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcfill/rational.hpp"
#include "mcfill/sets.hpp"
#include "mcfill/verdict.hpp"

namespace mcfill {

enum class GroundKind { Points, Naturals, Leaves };

// Incremental membership for the subset searches: elements are pushed in
// strictly ascending order; try_push leaves the cursor unchanged when the
// extended set is not a member. Because families are hereditary, a failed
// push prunes the whole branch soundly.
class MemberCursor {
public:
    virtual ~MemberCursor() = default;
    virtual bool try_push(int element) = 0;
    virtual void pop() = 0;
};

// A downward-closed family of finite sets, explicit (trie) or rule-based.
// Convention: the empty set belongs to every nonempty family; the empty
// family (no members at all) is representable and distinct from {∅}.
class HereditaryFamily {
public:
    virtual ~HereditaryFamily() = default;
    virtual GroundKind ground_kind() const = 0;
    virtual std::string kind_name() const = 0;
    virtual std::unique_ptr<MemberCursor> make_cursor() const;

    // Membership of a sorted duplicate-free set. Elements outside the
    // family's ground kind are an input error.
    bool contains(std::span<const int> sorted_set) const { return contains_impl(sorted_set); }
    bool contains(std::initializer_list<int> elems) const {
        return contains_impl({elems.begin(), elems.size()});
    }

private:
    virtual bool contains_impl(std::span<const int> sorted_set) const = 0;
};

// Smallest hereditary family containing every listed set. No generators
// means the empty family; a single empty generator means {∅}.
class ExplicitFamily final : public HereditaryFamily {
public:
    explicit ExplicitFamily(const std::vector<std::vector<int>>& generators,
                            GroundKind kind = GroundKind::Points);
    GroundKind ground_kind() const override { return kind_; }
    std::string kind_name() const override { return "explicit"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;

    std::size_t node_count() const { return nodes_.size(); }
    int child(int node, int element) const;  // trie step; -1 when absent

private:
    bool contains_impl(std::span<const int> sorted_set) const override;
    struct Node {
        std::vector<std::pair<int, int>> children;  // element -> node index, ascending
    };
    int ensure_child(int node, int element);
    void insert_closure(int node, std::span<const int> elems);

    std::vector<Node> nodes_;  // node 0 = ∅; empty trie = empty family
    bool has_empty_ = false;
    GroundKind kind_;
};

// {S ⊆ N : S = ∅ or |S| <= min S}, elements are naturals >= 1.
class SchreierFamily final : public HereditaryFamily {
public:
    GroundKind ground_kind() const override { return GroundKind::Naturals; }
    std::string kind_name() const override { return "schreier"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;

private:
    bool contains_impl(std::span<const int> sorted_set) const override;
};

// Finite sets of width-L leaves whose pairwise divergence nodes form a
// Schreier set under the breadth-first tree numbering. Elements are leaf
// codes (see dyadic.hpp).
class DyadicDFamily final : public HereditaryFamily {
public:
    explicit DyadicDFamily(int leaf_length);
    GroundKind ground_kind() const override { return GroundKind::Leaves; }
    std::string kind_name() const override { return "dyadicD"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;
    int leaf_length() const { return length_; }

private:
    bool contains_impl(std::span<const int> sorted_set) const override;
    int length_;
};

// ⋃_γ [C_γ]^{<ω}: sets contained in a single class. Classes need not
// cover the ground set; an element in no class belongs to no nonempty
// member.
class PartitionFamily final : public HereditaryFamily {
public:
    explicit PartitionFamily(std::vector<std::vector<int>> classes,
                             GroundKind kind = GroundKind::Points);
    GroundKind ground_kind() const override { return kind_; }
    std::string kind_name() const override { return "partition"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;
    const std::vector<std::vector<int>>& classes() const { return classes_; }
    // class index of an element, -1 when unassigned
    int class_of(int element) const;

private:
    bool contains_impl(std::span<const int> sorted_set) const override;
    std::vector<std::vector<int>> classes_;
    std::unordered_map<int, int> class_of_;
    GroundKind kind_;
};

// Every finite set. 1-filling on anything.
class AllSubsetsFamily final : public HereditaryFamily {
public:
    explicit AllSubsetsFamily(GroundKind kind = GroundKind::Points) : kind_(kind) {}
    GroundKind ground_kind() const override { return kind_; }
    std::string kind_name() const override { return "all"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;

private:
    bool contains_impl(std::span<const int>) const override { return true; }
    GroundKind kind_;
};

// A naturals-ground rule family re-grounded on point ids: point p plays
// the natural p+1, so model points are numbered 1..n in model order.
class ShiftedNaturalsFamily final : public HereditaryFamily {
public:
    explicit ShiftedNaturalsFamily(std::unique_ptr<HereditaryFamily> base);
    GroundKind ground_kind() const override { return GroundKind::Points; }
    std::string kind_name() const override { return base_->kind_name(); }
    std::unique_ptr<MemberCursor> make_cursor() const override;

private:
    bool contains_impl(std::span<const int> sorted_set) const override;
    std::unique_ptr<HereditaryFamily> base_;
};

// {F : |F| <= max_size}.
class SizeAtMostFamily final : public HereditaryFamily {
public:
    SizeAtMostFamily(int max_size, GroundKind kind = GroundKind::Points);
    GroundKind ground_kind() const override { return kind_; }
    std::string kind_name() const override { return "sizeAtMost"; }
    std::unique_ptr<MemberCursor> make_cursor() const override;
    int max_size() const { return max_size_; }

private:
    bool contains_impl(std::span<const int> sorted_set) const override {
        return static_cast<int>(sorted_set.size()) <= max_size_;
    }
    int max_size_;
    GroundKind kind_;
};

std::unique_ptr<HereditaryFamily> build_explicit(const std::vector<std::vector<int>>& members,
                                                 GroundKind kind = GroundKind::Points);

// True iff every subset of A is a member. All shipped families enforce or
// guarantee heredity, so this reduces to membership of A itself.
bool is_compact_counterexample(const HereditaryFamily& family, std::span<const int> a);

struct SearchLimits {
    std::uint64_t max_nodes = 4'000'000;  // try_push budget per search
};

// Maximum of sum(w) over members F ⊆ H, by heredity-pruned DFS over the
// sorted elements of H. Exact; ties resolve to the first maximizer in DFS
// order. Returns nullopt only for the empty family. Throws ResourceError
// when the member space exceeds the cap.
std::optional<WeightedSelection> max_member_weight(const HereditaryFamily& family,
                                                   std::span<const int> h,
                                                   std::span<const Rational> weights,
                                                   const SearchLimits& limits = {});

// Unit-weight specialization: a maximum-cardinality member of H.
std::optional<std::vector<int>> max_member_size(const HereditaryFamily& family,
                                                std::span<const int> h,
                                                const SearchLimits& limits = {});

// First member (DFS order) of size >= target; prunes branches that cannot
// reach the target. Cheap for the shipped rule families even on large H.
std::optional<std::vector<int>> find_member_of_size(const HereditaryFamily& family,
                                                    std::span<const int> h, int target,
                                                    const SearchLimits& limits = {});

struct FillingOptions {
    int max_h = 10;                    // sweep bound on |H|
    std::uint64_t max_subsets = 2'000'000;  // total H count guard
    SearchLimits search;
};

// Verifies the filling property restricted to |H| <= max_h: every such
// H ⊆ S contains a member of size >= epsilon*|H|. The restriction is part
// of the claim and is echoed in reports. A false verdict carries the
// violating H; H = ∅ is vacuously satisfied.
Verdict is_filling(const HereditaryFamily& family, std::span<const int> s,
                   const Rational& epsilon, const FillingOptions& options = {});

}  // namespace mcfill
