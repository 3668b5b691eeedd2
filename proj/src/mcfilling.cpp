#include "mcfill/mcfilling.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include "mcfill/errors.hpp"

namespace mcfill {

namespace {

// Point partitions stand in for partitions of the whole space: points are
// the only content a member set can distinguish, so mass-only blocks sit
// in a never-hit part of their own and measure enters through hulls only.

struct Incidence {
    std::vector<int> part_of;  // point -> part
    int part_count;
};

Incidence incidence(const GroundModel& model, const std::vector<PointSet>& parts) {
    return {part_of_points(model, parts), static_cast<int>(parts.size())};
}

}  // namespace

std::vector<MeasurableSet> hull_covers(const GroundModel& model,
                                       const std::vector<PointSet>& parts) {
    std::vector<MeasurableSet> covers;
    covers.reserve(parts.size());
    for (const PointSet& part : parts) covers.push_back(model.hull(part));
    return covers;
}

Rational partition_value(const GroundModel& model, const std::vector<PointSet>& parts,
                         const PointSet& f) {
    validate_partition(model, parts);
    model.validate_points(f);
    PointSet hit_points;
    for (const PointSet& part : parts)
        if (sets_intersect(part, f)) hit_points = set_union(hit_points, part);
    return model.outer_measure(hit_points);
}

Rational cover_value(const GroundModel& model, const std::vector<PointSet>& parts,
                     const std::vector<MeasurableSet>& covers, const PointSet& f) {
    if (covers.size() != parts.size()) throw InputError("one cover per part required");
    model.validate_points(f);
    MeasurableSet blocks;
    for (std::size_t m = 0; m < parts.size(); ++m) {
        if (!is_subset(model.hull(parts[m]), normalized(covers[m])))
            throw InputError("cover " + std::to_string(m) + " does not contain part " +
                             std::to_string(m));
        if (sets_intersect(parts[m], f)) blocks = set_union(blocks, covers[m]);
    }
    return model.measure(blocks);
}

McValueResult mc_value(const GroundModel& model, const HereditaryFamily& family,
                       const std::vector<PointSet>& parts, const SearchLimits& limits) {
    Incidence inc = incidence(model, parts);
    if (!family.contains({})) return {Rational(0), {}, {}};

    // Per heredity a maximizer never needs two points in one part.
    auto cursor = family.make_cursor();
    std::uint64_t used = 0;

    std::vector<char> part_hit(parts.size(), 0);
    std::vector<char> block_covered(model.block_count(), 0);
    std::vector<int> hit_list;
    Rational value = 0;
    PointSet current;

    Rational best_value = 0;
    PointSet best_member;
    std::vector<int> best_parts;

    auto cover_part = [&](int m, std::vector<BlockId>& newly) {
        for (PointId p : parts[m]) {
            BlockId b = model.block_of(p);
            if (!block_covered[b]) {
                block_covered[b] = 1;
                newly.push_back(b);
                value += model.block(b).measure;
            }
        }
    };

    auto dfs = [&](auto&& self, PointId from) -> void {
        for (PointId p = from; p < model.point_count(); ++p) {
            int m = inc.part_of[p];
            if (part_hit[m]) continue;
            if (++used > limits.max_nodes)
                throw ResourceError("mc_value search exceeded " +
                                    std::to_string(limits.max_nodes) + " nodes");
            if (!cursor->try_push(p)) continue;
            current.push_back(p);
            part_hit[m] = 1;
            hit_list.push_back(m);
            std::vector<BlockId> newly;
            cover_part(m, newly);
            if (value > best_value) {
                best_value = value;
                best_member = current;
                best_parts = hit_list;
            }
            self(self, p + 1);
            for (BlockId b : newly) {
                block_covered[b] = 0;
                value -= model.block(b).measure;
            }
            hit_list.pop_back();
            part_hit[m] = 0;
            current.pop_back();
            cursor->pop();
        }
    };
    dfs(dfs, 0);
    std::sort(best_parts.begin(), best_parts.end());
    return {best_value, best_member, best_parts};
}

McValueResult cover_mc_value(const GroundModel& model, const HereditaryFamily& family,
                             const std::vector<PointSet>& parts,
                             const std::vector<MeasurableSet>& covers,
                             const SearchLimits& limits) {
    Incidence inc = incidence(model, parts);
    if (covers.size() != parts.size()) throw InputError("one cover per part required");
    std::vector<MeasurableSet> norm_covers;
    norm_covers.reserve(covers.size());
    for (std::size_t m = 0; m < covers.size(); ++m) {
        MeasurableSet c = normalized(covers[m]);
        model.validate_blocks(c);
        if (!is_subset(model.hull(parts[m]), c))
            throw InputError("cover " + std::to_string(m) + " does not contain part " +
                             std::to_string(m));
        norm_covers.push_back(std::move(c));
    }
    if (!family.contains({})) return {Rational(0), {}, {}};

    auto cursor = family.make_cursor();
    std::uint64_t used = 0;
    std::vector<int> cover_multiplicity(model.block_count(), 0);
    std::vector<char> part_hit(parts.size(), 0);
    std::vector<int> hit_list;
    Rational value = 0;
    PointSet current;

    Rational best_value = 0;
    PointSet best_member;
    std::vector<int> best_parts;

    auto dfs = [&](auto&& self, PointId from) -> void {
        for (PointId p = from; p < model.point_count(); ++p) {
            int m = inc.part_of[p];
            if (part_hit[m]) continue;
            if (++used > limits.max_nodes)
                throw ResourceError("cover_mc_value search exceeded " +
                                    std::to_string(limits.max_nodes) + " nodes");
            if (!cursor->try_push(p)) continue;
            current.push_back(p);
            part_hit[m] = 1;
            hit_list.push_back(m);
            for (BlockId b : norm_covers[m])
                if (cover_multiplicity[b]++ == 0) value += model.block(b).measure;
            if (value > best_value) {
                best_value = value;
                best_member = current;
                best_parts = hit_list;
            }
            self(self, p + 1);
            for (BlockId b : norm_covers[m])
                if (--cover_multiplicity[b] == 0) value -= model.block(b).measure;
            hit_list.pop_back();
            part_hit[m] = 0;
            current.pop_back();
            cursor->pop();
        }
    };
    dfs(dfs, 0);
    std::sort(best_parts.begin(), best_parts.end());
    return {best_value, best_member, best_parts};
}

// ---------------------------------------------------------------------------
// Partition sweeps

namespace {

enum class Route { OuterMeasure, Covers };

struct SweepOutcome {
    Rational min_value;
    std::size_t argmin = 0;
    bool refuted = false;
    std::size_t first_refutation = 0;
};

constexpr int kFastMaxBlocks = 12;
constexpr int kFastMaxPoints = 62;

// Measure-equivalence classes over block masks: DFS branches compare ints
// instead of rationals, and equal measures land in one class so the
// min/argmin tie-breaks stay value-deterministic.
struct MaskTable {
    std::vector<Rational> measures;     // by mask
    std::vector<int> klass;             // by mask, ascending with measure
    std::vector<Rational> class_value;  // by class
};

MaskTable build_mask_table(const GroundModel& model) {
    const int b = model.block_count();
    MaskTable t;
    const std::size_t n = std::size_t{1} << b;
    t.measures.resize(n);
    t.measures[0] = 0;
    for (std::size_t mask = 1; mask < n; ++mask) {
        int low = std::countr_zero(mask);
        t.measures[mask] = t.measures[mask & (mask - 1)] + model.block(low).measure;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (t.measures[x] != t.measures[y]) return t.measures[x] < t.measures[y];
        return x < y;
    });
    t.klass.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && t.measures[order[i]] == t.measures[order[i - 1]])
            t.klass[order[i]] = t.klass[order[i - 1]];
        else {
            t.klass[order[i]] = static_cast<int>(t.class_value.size());
            t.class_value.push_back(t.measures[order[i]]);
        }
    }
    return t;
}

// Best achievable measure-class for one partition, integer-only DFS.
int best_class_fast(MemberCursor& cursor, std::span<const std::int8_t> rgs,
                    const MaskTable& table, const std::vector<int>& block_of,
                    std::uint64_t& used, std::uint64_t cap) {
    std::uint32_t part_mask_bits[64] = {};  // block mask per part
    for (std::size_t p = 0; p < rgs.size(); ++p)
        part_mask_bits[rgs[p]] |= std::uint32_t{1} << block_of[p];

    std::uint64_t parts_hit = 0;
    std::uint32_t blocks = 0;
    int best = table.klass[0];

    auto dfs = [&](auto&& self, int from) -> void {
        for (int p = from; p < static_cast<int>(rgs.size()); ++p) {
            int m = rgs[p];
            if (parts_hit & (std::uint64_t{1} << m)) continue;
            if (++used > cap)
                throw ResourceError("partition sweep member search exceeded " +
                                    std::to_string(cap) + " nodes");
            if (!cursor.try_push(p)) continue;
            parts_hit |= std::uint64_t{1} << m;
            std::uint32_t saved = blocks;
            blocks |= part_mask_bits[m];
            best = std::max(best, table.klass[blocks]);
            self(self, p + 1);
            blocks = saved;
            parts_hit &= ~(std::uint64_t{1} << m);
            cursor.pop();
        }
    };
    dfs(dfs, 0);
    return best;
}

// Cover-route evaluation of one partition: covers are the hulls, built as
// explicit block sets, and the payoff is a fresh union-and-sum per
// candidate mask (memoized per model).
struct CoverMemo {
    std::vector<char> known;
    std::vector<Rational> value;
};

const Rational& cover_measure(const GroundModel& model, CoverMemo& memo, std::uint32_t mask) {
    if (memo.known.empty()) {
        memo.known.assign(std::size_t{1} << model.block_count(), 0);
        memo.value.resize(std::size_t{1} << model.block_count());
    }
    if (!memo.known[mask]) {
        Rational total = 0;
        for (std::uint32_t rest = mask; rest;) {
            int b = std::countr_zero(rest);
            rest &= rest - 1;
            total += model.block(b).measure;
        }
        memo.value[mask] = total;
        memo.known[mask] = 1;
    }
    return memo.value[mask];
}

Rational best_value_covers_fast(const GroundModel& model, MemberCursor& cursor,
                                std::span<const std::int8_t> rgs, int part_count, CoverMemo& memo,
                                std::vector<std::uint32_t>& candidates,
                                std::uint64_t& used, std::uint64_t cap) {
    // explicit covers: the hull of each part as a block set
    std::vector<MeasurableSet> covers(part_count);
    for (std::size_t p = 0; p < rgs.size(); ++p)
        covers[rgs[p]].push_back(model.block_of(static_cast<PointId>(p)));
    std::uint32_t cover_mask[64] = {};
    for (int m = 0; m < part_count; ++m) {
        covers[m] = normalized(std::move(covers[m]));
        for (BlockId b : covers[m]) cover_mask[m] |= std::uint32_t{1} << b;
    }

    std::uint64_t parts_hit = 0;
    std::uint32_t blocks = 0;
    candidates.clear();

    // keep only inclusion-maximal achieved masks; measure is monotone
    auto offer = [&](std::uint32_t mask) {
        for (std::uint32_t c : candidates)
            if ((mask | c) == c) return;  // dominated
        std::erase_if(candidates, [&](std::uint32_t c) { return (c | mask) == mask; });
        candidates.push_back(mask);
    };

    auto dfs = [&](auto&& self, int from) -> void {
        for (int p = from; p < static_cast<int>(rgs.size()); ++p) {
            int m = rgs[p];
            if (parts_hit & (std::uint64_t{1} << m)) continue;
            if (++used > cap)
                throw ResourceError("partition sweep member search exceeded " +
                                    std::to_string(cap) + " nodes");
            if (!cursor.try_push(p)) continue;
            parts_hit |= std::uint64_t{1} << m;
            std::uint32_t saved = blocks;
            blocks |= cover_mask[m];
            offer(blocks);
            self(self, p + 1);
            blocks = saved;
            parts_hit &= ~(std::uint64_t{1} << m);
            cursor.pop();
        }
    };
    dfs(dfs, 0);

    Rational best = 0;
    for (std::uint32_t c : candidates) {
        const Rational& v = cover_measure(model, memo, c);
        if (v > best) best = v;
    }
    return best;
}

SweepOutcome run_sweep(const GroundModel& model, const HereditaryFamily& family,
                       const Rational* epsilon, Route route, const McOptions& options) {
    const int n = model.point_count();
    if (n > options.max_points)
        throw ResourceError("partition sweep over " + std::to_string(n) +
                            " points exceeds max_points = " + std::to_string(options.max_points) +
                            " (Bell numbers grow fast; raise --max-points deliberately)");
    RgsTable table = materialize_partitions(n);
    const bool family_empty = !family.contains({});
    const bool fast =
        n <= kFastMaxPoints && model.block_count() <= kFastMaxBlocks && !family_empty;

    MaskTable masks;
    int eps_class = -1;  // largest class with measure <= epsilon (fast route A)
    if (fast && route == Route::OuterMeasure) {
        masks = build_mask_table(model);
        if (epsilon) {
            for (std::size_t k = 0; k < masks.class_value.size(); ++k)
                if (masks.class_value[k] <= *epsilon) eps_class = static_cast<int>(k);
        }
    }
    std::vector<int> block_of(n);
    for (int p = 0; p < n; ++p) block_of[p] = model.block_of(p);

    struct Local {
        bool any = false;
        Rational min_value;
        std::size_t argmin = 0;
        bool refuted = false;
        std::size_t first_refutation = 0;
    };

    const int thread_count =
        std::max(1, std::min<int>(options.threads, static_cast<int>(table.count)));
    std::vector<Local> locals(thread_count);
    const std::size_t chunk = (table.count + thread_count - 1) / thread_count;

    auto work = [&](int tid) {
        Local& local = locals[tid];
        const std::size_t lo = tid * chunk;
        const std::size_t hi = std::min(table.count, lo + chunk);
        if (lo >= hi) return;
        std::unique_ptr<MemberCursor> cursor;
        if (!family_empty) cursor = family.make_cursor();
        CoverMemo memo;
        std::vector<std::uint32_t> candidates;
        std::uint64_t used = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            Rational value;
            bool value_refutes;
            if (family_empty) {
                value = 0;
                value_refutes = epsilon != nullptr;  // 0 <= eps always
            } else if (fast && route == Route::OuterMeasure) {
                int best = best_class_fast(*cursor, table.row(i), masks, block_of, used,
                                           options.search.max_nodes);
                value = masks.class_value[best];
                value_refutes = epsilon && best <= eps_class;
            } else if (fast && route == Route::Covers) {
                value = best_value_covers_fast(model, *cursor, table.row(i),
                                               table.part_counts[i], memo, candidates, used,
                                               options.search.max_nodes);
                value_refutes = epsilon && value <= *epsilon;
            } else {
                auto parts = parts_from_rgs(table.row(i), table.part_counts[i]);
                McValueResult r = route == Route::OuterMeasure
                                      ? mc_value(model, family, parts, options.search)
                                      : cover_mc_value(model, family, parts,
                                                       hull_covers(model, parts), options.search);
                value = r.value;
                value_refutes = epsilon && value <= *epsilon;
            }
            if (!local.any || value < local.min_value) {
                local.any = true;
                local.min_value = value;
                local.argmin = i;
            }
            if (value_refutes) {
                local.refuted = true;
                local.first_refutation = i;
                break;  // first refuting partition in this chunk
            }
        }
    };

    if (thread_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    SweepOutcome out;
    bool any = false;
    for (const Local& local : locals) {
        if (!local.any) continue;
        if (!any || local.min_value < out.min_value ||
            (local.min_value == out.min_value && local.argmin < out.argmin)) {
            out.min_value = local.min_value;
            out.argmin = local.argmin;
        }
        any = true;
        if (local.refuted && (!out.refuted || local.first_refutation < out.first_refutation)) {
            out.refuted = true;
            out.first_refutation = local.first_refutation;
        }
    }
    if (!any) throw InvariantError("partition sweep visited nothing");
    return out;
}

Verdict make_mc_verdict(const GroundModel& model, const HereditaryFamily& family,
                        const Rational& epsilon, Route route, const McOptions& options) {
    if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must satisfy 0 < epsilon < 1");
    SweepOutcome sweep = run_sweep(model, family, &epsilon, route, options);

    const std::size_t idx = sweep.refuted ? sweep.first_refutation : sweep.argmin;
    RgsTable table = materialize_partitions(model.point_count());
    auto parts = parts_from_rgs(table.row(idx), table.part_counts[idx]);
    McValueResult replay = route == Route::OuterMeasure
                               ? mc_value(model, family, parts, options.search)
                               : cover_mc_value(model, family, parts, hull_covers(model, parts),
                                                options.search);

    Verdict verdict;
    verdict.epsilon = epsilon;
    verdict.holds = !sweep.refuted;
    verdict.value = replay.value;
    if (sweep.refuted && !(replay.value <= epsilon))
        throw InvariantError("refuting partition no longer refutes on replay");
    if (!sweep.refuted && replay.value != sweep.min_value)
        throw InvariantError("sweep minimum does not replay");
    verdict.certificate.kind =
        route == Route::OuterMeasure ? "mc-partition" : "mc-partition-covers";
    verdict.certificate.partition = parts;
    if (route == Route::Covers) verdict.certificate.covers = hull_covers(model, parts);
    verdict.certificate.witness = replay.member;
    return verdict;
}

}  // namespace

Verdict check_mc_filling(const GroundModel& model, const HereditaryFamily& family,
                         const Rational& epsilon, const McOptions& options) {
    return make_mc_verdict(model, family, epsilon, Route::OuterMeasure, options);
}

Verdict check_mc_filling_covers(const GroundModel& model, const HereditaryFamily& family,
                                const Rational& epsilon, const McOptions& options) {
    return make_mc_verdict(model, family, epsilon, Route::Covers, options);
}

Rational mc_filling_threshold(const GroundModel& model, const HereditaryFamily& family,
                              const McOptions& options) {
    return run_sweep(model, family, nullptr, Route::OuterMeasure, options).min_value;
}

Rational mc_filling_threshold_covers(const GroundModel& model, const HereditaryFamily& family,
                                     const McOptions& options) {
    return run_sweep(model, family, nullptr, Route::Covers, options).min_value;
}

// ---------------------------------------------------------------------------
// filling => MC-filling pipeline

PipelineResult filling_to_mc_pipeline(const GroundModel& model, const PointSet& a,
                                      const HereditaryFamily& family, const Rational& epsilon,
                                      const Rational& eta1, const std::vector<PointSet>& parts,
                                      const PipelineOptions& options) {
    if (epsilon <= 0 || epsilon > 1) throw InputError("epsilon must satisfy 0 < epsilon <= 1");
    PointSet set_a = normalized(a);
    model.validate_points(set_a);
    validate_partition(model, parts);

    PipelineResult result;
    result.eta = model.outer_measure(set_a);
    result.eta1 = eta1;
    if (!(eta1 > 0 && eta1 < result.eta))
        throw InputError("eta1 must satisfy 0 < eta1 < mu*(A) = " + format_rational(result.eta));

    if (options.verify_filling) {
        FillingOptions fo;
        fo.max_h = options.filling_max_h;
        fo.search = options.search;
        Verdict filling = is_filling(family, set_a, epsilon, fo);
        if (!filling.holds)
            throw InputError("family is not epsilon-filling on A (violating H of size " +
                             std::to_string(filling.certificate.witness.size()) + ")");
        result.filling_verified = true;
    }

    result.eta2 = eta1 / 2;

    // prefix of parts capturing mu*(A) up to eta2
    PointSet prefix;
    result.m0 = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        prefix = set_union(prefix, set_intersection(parts[k], set_a));
        if (result.eta - model.outer_measure(prefix) < result.eta2) {
            result.m0 = static_cast<int>(k) + 1;
            break;
        }
    }
    if (result.m0 == 0) throw InvariantError("no prefix captures mu*(A) up to eta2");

    result.covers = hull_covers(model, parts);
    std::vector<MeasurableSet> leading(result.covers.begin(),
                                       result.covers.begin() + result.m0);
    std::vector<MeasurableSet> disjoint = disjointify(leading);

    std::vector<int> used_parts;
    std::vector<Rational> b_measure(result.m0);
    for (int m = 0; m < result.m0; ++m) {
        b_measure[m] = model.measure(disjoint[m]);
        if (b_measure[m] > 0) used_parts.push_back(m);
    }
    if (used_parts.empty()) throw InvariantError("all disjointified covers are null");

    result.eta3 = (result.eta1 - result.eta2) / (2 * result.m0);

    // single common denominator: every block measure under the used covers
    // must be an integer multiple of theta, and every (mu(B_m)-eta3, mu(B_m))
    // must contain a positive p_m/q
    BigInt block_lcm = 1;
    MeasurableSet used_blocks;
    for (int m : used_parts) used_blocks = set_union(used_blocks, disjoint[m]);
    for (BlockId b : used_blocks) {
        const Rational& mb = model.block(b).measure;
        if (mb > 0) block_lcm = lcm(block_lcm, denominator(mb));
    }

    constexpr std::uint64_t kMaxDenominator = 4'000'000;
    std::vector<BigInt> numerators(result.m0);
    BigInt q;
    for (BigInt cand = block_lcm;; cand += block_lcm) {
        if (cand > kMaxDenominator)
            throw ResourceError("no workable common denominator below " +
                                std::to_string(kMaxDenominator));
        if (cand < 2) continue;
        bool ok = true;
        for (int m : used_parts) {
            // largest k with k/cand < mu(B_m)
            BigInt k = numerator(b_measure[m] * cand) / denominator(b_measure[m] * cand);
            if (b_measure[m] * cand == k) k -= 1;
            if (k < 1 || !(Rational(k, cand) > b_measure[m] - result.eta3)) {
                ok = false;
                break;
            }
            numerators[m] = k;
        }
        if (ok) {
            q = cand;
            break;
        }
    }
    result.q = q;
    result.theta = Rational(1, q);

    // tags: p_m points of A inside part m
    result.tag_counts.assign(parts.size(), 0);
    BigInt total_tags = 0;
    for (int m : used_parts) {
        PointSet avail = set_intersection(parts[m], set_a);
        BigInt need = numerators[m];
        total_tags += need;
        if (BigInt(avail.size()) < need)
            throw InputError("part " + std::to_string(m) + " meets A in " +
                             std::to_string(avail.size()) + " points but p_m = " + need.str() +
                             " tag points are required (the finite stand-in for an infinite "
                             "A-intersection)");
        result.tag_counts[m] = static_cast<int>(need);
        avail.resize(static_cast<std::size_t>(need));
        result.witness_pool = set_union(result.witness_pool, avail);
    }

    // equipartition feasibility, on an internally refined copy: split each
    // positive block under the used covers into measure-theta blocks. All
    // points stay in the first piece; the pieces carry no tags.
    {
        std::vector<BigInt> piece_count(model.block_count(), 1);
        for (BlockId b : used_blocks) {
            Rational scaled = model.block(b).measure * q;
            if (denominator(scaled) != 1)
                throw InvariantError("block measure not divisible by theta after refinement");
            if (numerator(scaled) > 1) piece_count[b] = numerator(scaled);
        }
        GroundModel refined = model;
        for (BlockId b = model.block_count() - 1; b >= 0; --b)
            if (piece_count[b] > 1)
                refined = refined.refine_block(b, static_cast<int>(piece_count[b]));
        std::vector<int> start(model.block_count());
        int shift = 0;
        for (BlockId b = 0; b < model.block_count(); ++b) {
            start[b] = b + shift;
            shift += static_cast<int>(piece_count[b]) - 1;
        }
        for (int m : used_parts) {
            MeasurableSet refined_blocks;
            for (BlockId b : disjoint[m])
                for (BigInt i = 0; i < piece_count[b]; ++i)
                    refined_blocks.push_back(start[b] + static_cast<int>(i));
            auto pieces = equipartition(refined, normalized(refined_blocks), result.theta);
            if (BigInt(pieces.size()) < numerators[m])
                throw InvariantError("equipartition yields too few theta-pieces");
        }
    }

    // the counting inequality behind the final bound
    Rational tag_mass = Rational(total_tags, q);
    if (!(result.eta < result.eta1 + tag_mass))
        throw InvariantError("witness pool too light: eta >= eta1 + sum(p_m)*theta");

    // extract a filling member from the pool
    const BigInt pool = BigInt(result.witness_pool.size());
    BigInt target_num = numerator(epsilon) * pool;
    BigInt target = target_num / denominator(epsilon);
    if (target * denominator(epsilon) < target_num) target += 1;  // ceil(eps * |H|)
    auto member = find_member_of_size(family, result.witness_pool, static_cast<int>(target),
                                      options.search);
    if (!member)
        throw InputError("filling extraction failed: no member of size " + target.str() +
                         " inside the witness pool of " + std::to_string(
                             result.witness_pool.size()) + " tags; the family is not epsilon-"
                         "filling there");

    result.selection.member = *member;
    result.selection.value = cover_value(model, parts, result.covers, *member);
    result.bound = epsilon * (result.eta - result.eta1);
    if (!(result.selection.value > result.bound))
        throw InvariantError("pipeline output misses the epsilon*(eta-eta1) bound");
    return result;
}

// ---------------------------------------------------------------------------
// greedy witness engine

void validate_transversals(const GroundModel& model, const TransversalSystem& ts) {
    std::vector<char> seen(model.point_count(), 0);
    for (const PointSet& fiber : ts.fibers) {
        if (!is_sorted_unique(fiber)) throw InputError("fibers must be sorted sets");
        model.validate_points(fiber);
        for (PointId p : fiber) {
            if (seen[p])
                throw InputError("point '" + model.point_name(p) + "' lies in two fibers");
            seen[p] = 1;
        }
    }
    for (PointId p = 0; p < model.point_count(); ++p)
        if (!seen[p]) throw InputError("point '" + model.point_name(p) + "' lies in no fiber");
    for (std::size_t c = 0; c < ts.fibers.size(); ++c) {
        MeasurableSet hull = model.hull(ts.fibers[c]);
        for (BlockId b = 0; b < model.block_count(); ++b)
            if (model.block(b).measure > 0 && !set_contains(hull, b))
                throw InputError("fiber " + std::to_string(c + 1) +
                                 " misses positive block " + std::to_string(b) +
                                 "; fibers must have full outer measure");
    }
}

GreedyResult greedy_select(const GroundModel& model, const TransversalSystem& ts,
                           const HereditaryFamily& class_family,
                           const std::vector<PointSet>& parts, const Rational& epsilon,
                           const SearchLimits& limits) {
    if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must satisfy 0 < epsilon < 1");
    validate_transversals(model, ts);
    validate_partition(model, parts);
    const int class_count = static_cast<int>(ts.fibers.size());
    const int part_count = static_cast<int>(parts.size());

    GreedyResult result;
    result.k_of_class.resize(class_count, 0);

    // k(alpha): least prefix of parts whose fiber-trace exceeds epsilon
    for (int c = 0; c < class_count; ++c) {
        PointSet trace;
        for (int m = 0; m < part_count; ++m) {
            trace = set_union(trace, set_intersection(ts.fibers[c], parts[m]));
            if (model.outer_measure(trace) > epsilon) {
                result.k_of_class[c] = m + 1;
                break;
            }
        }
        if (result.k_of_class[c] == 0)
            throw InvariantError("fiber " + std::to_string(c + 1) +
                                 " never exceeds epsilon; full outer measure should prevent this");
    }

    // first n whose level set P_n holds a size-n family member
    std::vector<int> chosen;
    int n = 0;
    for (int cand = 1; cand <= part_count && chosen.empty(); ++cand) {
        std::vector<int> level;  // 1-based class indices with k(alpha) = cand
        for (int c = 0; c < class_count; ++c)
            if (result.k_of_class[c] == cand) level.push_back(c + 1);
        if (static_cast<int>(level.size()) < cand) continue;
        auto member = find_member_of_size(class_family, level, cand, limits);
        if (member) {
            chosen = *member;
            n = cand;
        }
    }
    if (chosen.empty())
        throw InputError("no n admits a size-n class-family member inside P_n; "
                         "the model is too small for the construction");
    result.chosen_classes = chosen;
    result.n = n;

    // inductive pick: t_j in Z_{alpha_j} ∩ Omega_{m_j}, m_j fresh within
    // the first n parts, stopping once the hit parts exceed epsilon
    std::vector<char> part_used(part_count, 0);
    PointSet hit_points;
    for (int j = 0; j < n; ++j) {
        const PointSet& fiber = ts.fibers[chosen[j] - 1];
        int pick_part = -1;
        PointId pick_point = -1;
        for (int m = 0; m < n && pick_part < 0; ++m) {
            if (part_used[m]) continue;
            PointSet common = set_intersection(fiber, parts[m]);
            if (!common.empty()) {
                pick_part = m;
                pick_point = common.front();
            }
        }
        if (pick_part < 0)
            throw InvariantError("selection step " + std::to_string(j + 1) +
                                 " finds no fresh part meeting its fiber");
        part_used[pick_part] = 1;
        result.member.push_back(pick_point);
        result.class_sequence.push_back(chosen[j]);
        result.part_sequence.push_back(pick_part);
        hit_points = set_union(hit_points, parts[pick_part]);
        if (model.outer_measure(hit_points) > epsilon) break;
    }
    result.member = normalized(std::move(result.member));
    result.value = partition_value(model, parts, result.member);
    if (!(result.value > epsilon))
        throw InvariantError("greedy selection never exceeded epsilon");

    // phi(F) must be a family member; subsets of D are members by heredity
    std::vector<int> phi_image(result.class_sequence.begin(), result.class_sequence.end());
    phi_image = normalized(std::move(phi_image));
    if (phi_image.size() != result.member.size())
        throw InvariantError("phi is not injective on the selection");
    if (!class_family.contains(phi_image))
        throw InvariantError("phi image left the class family");
    return result;
}

}  // namespace mcfill
