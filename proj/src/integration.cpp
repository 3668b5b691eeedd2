#include "mcfill/integration.hpp"

#include <algorithm>
#include <map>

#include "mcfill/errors.hpp"
#include "mcfill/partition_enum.hpp"

namespace mcfill {

void validate_tagged(const GroundModel& model, const TaggedFamily& tagged) {
    std::vector<char> taken(model.block_count(), 0);
    for (const TaggedPiece& piece : tagged) {
        model.validate_blocks(piece.piece);
        if (!is_sorted_unique(piece.piece))
            throw InputError("tagged pieces must be sorted block sets");
        if (piece.tag < 0 || piece.tag >= model.point_count())
            throw InputError("tagged piece has unknown tag id " + std::to_string(piece.tag));
        for (BlockId b : piece.piece) {
            if (taken[b])
                throw InputError("tagged pieces overlap at block " + std::to_string(b));
            taken[b] = 1;
        }
    }
}

void validate_indicator_model(const GroundModel& model, const IndicatorFunctionModel& fm) {
    for (const auto& [name, set] : fm.functionals) {
        if (!is_sorted_unique(set))
            throw InputError("functional set '" + name + "' must be sorted");
        model.validate_points(set);
    }
}

RiemannValue riemann_norm(const GroundModel& model, const IndicatorFunctionModel& fm,
                          const TaggedFamily& tagged) {
    validate_tagged(model, tagged);
    validate_indicator_model(model, fm);
    RiemannValue best{Rational(0), "", {}};
    for (const auto& [name, set] : fm.functionals) {
        Rational total = 0;
        PointSet tags;
        for (const TaggedPiece& piece : tagged) {
            if (set_contains(set, piece.tag)) {
                total += model.measure(piece.piece);
                tags.push_back(piece.tag);
            }
        }
        if (total > best.value) best = {total, name, normalized(std::move(tags))};
    }
    return best;
}

WeightedSelection riemann_norm_family(const GroundModel& model, const HereditaryFamily& family,
                                      const TaggedFamily& tagged, const SearchLimits& limits) {
    validate_tagged(model, tagged);
    std::map<PointId, Rational> weight_of;
    for (const TaggedPiece& piece : tagged) weight_of[piece.tag] += model.measure(piece.piece);
    std::vector<int> tags;
    std::vector<Rational> weights;
    for (const auto& [tag, w] : weight_of) {
        tags.push_back(tag);
        weights.push_back(w);
    }
    auto best = max_member_weight(family, tags, weights, limits);
    if (!best) return {Rational(0), {}};  // the empty family counts nothing
    return *best;
}

IndicatorFunctionModel build_indicator_model(const GroundModel& model,
                                             const HereditaryFamily& family,
                                             const SearchLimits& limits) {
    IndicatorFunctionModel fm;
    if (!family.contains({})) return fm;
    PointSet points = model.all_points();
    auto cursor = family.make_cursor();
    std::uint64_t used = 0;
    std::vector<std::vector<int>> members{{}};
    std::vector<int> current;
    auto dfs = [&](auto&& self, std::size_t from) -> void {
        for (std::size_t j = from; j < points.size(); ++j) {
            if (++used > limits.max_nodes)
                throw ResourceError("member enumeration exceeded " +
                                    std::to_string(limits.max_nodes) + " nodes");
            if (!cursor->try_push(points[j])) continue;
            current.push_back(points[j]);
            members.push_back(current);
            self(self, j + 1);
            current.pop_back();
            cursor->pop();
        }
    };
    dfs(dfs, 0);
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i)
        fm.functionals.emplace_back("F" + std::to_string(i), members[i]);
    return fm;
}

IndicatorFunctionModel c0_model_from_partition(const GroundModel& model,
                                               const std::vector<PointSet>& classes) {
    validate_partition(model, classes);
    IndicatorFunctionModel fm;
    for (std::size_t c = 0; c < classes.size(); ++c)
        fm.functionals.emplace_back("C" + std::to_string(c + 1), classes[c]);
    return fm;
}

std::vector<PointSet> partition_from_c0_model(const GroundModel& model,
                                              const IndicatorFunctionModel& fm) {
    std::vector<PointSet> classes;
    classes.reserve(fm.functionals.size());
    for (const auto& [name, set] : fm.functionals) classes.push_back(set);
    validate_partition(model, classes);  // the sets must partition the points
    return classes;
}

// ---------------------------------------------------------------------------
// MC-integrability decision

namespace {

struct InnerBest {
    Rational value;
    int functional = -1;        // index into fm.functionals
    std::vector<int> tags;      // chosen tag per part, -1 where none
};

// Best assembly for one partition: for each functional, the tagged family
// made of the disjointified hull pieces of the compatible parts, each
// tagged inside the functional's set; its norm is the plain sum of the
// piece measures.
InnerBest best_assembly(const GroundModel& model, const IndicatorFunctionModel& fm,
                        const std::vector<PointSet>& parts) {
    std::vector<MeasurableSet> covers = hull_covers(model, parts);
    InnerBest best{Rational(0), -1, {}};
    for (std::size_t f = 0; f < fm.functionals.size(); ++f) {
        const PointSet& c = fm.functionals[f].second;
        std::vector<int> compat;
        for (std::size_t m = 0; m < parts.size(); ++m)
            if (sets_intersect(parts[m], c)) compat.push_back(static_cast<int>(m));
        if (compat.empty()) continue;
        std::vector<MeasurableSet> chosen;
        chosen.reserve(compat.size());
        for (int m : compat) chosen.push_back(covers[m]);
        Rational total = 0;
        for (const MeasurableSet& piece : disjointify(chosen)) total += model.measure(piece);
        if (best.functional < 0 || total > best.value) {
            best.value = total;
            best.functional = static_cast<int>(f);
            best.tags.assign(parts.size(), -1);
            for (int m : compat)
                best.tags[m] = set_intersection(parts[m], c).front();
        }
    }
    if (best.functional < 0) best.tags.assign(parts.size(), -1);
    return best;
}

void check_decide_inputs(const GroundModel& model, const IndicatorFunctionModel& fm,
                         const DecideOptions& options) {
    validate_indicator_model(model, fm);
    if (model.point_count() > options.max_points)
        throw ResourceError("partition sweep over " + std::to_string(model.point_count()) +
                            " points exceeds max_points = " + std::to_string(options.max_points));
    if (options.require_null)
        for (const auto& [name, set] : fm.functionals)
            if (model.outer_measure(set) != 0)
                throw InputError("functional set '" + name + "' has outer measure " +
                                 format_rational(model.outer_measure(set)) +
                                 "; the scalarly-null surrogate demands 0 "
                                 "(pass allow-nonnull to lift this)");
}

}  // namespace

Verdict decide_mc_integrability(const GroundModel& model, const IndicatorFunctionModel& fm,
                                const Rational& epsilon, const DecideOptions& options) {
    if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must satisfy 0 < epsilon < 1");
    check_decide_inputs(model, fm, options);

    Verdict verdict;
    verdict.epsilon = epsilon;
    verdict.holds = true;
    bool any = false;
    Rational min_value;
    std::vector<PointSet> min_parts;
    InnerBest min_best;

    for_each_partition(model.point_count(), [&](std::span<const int> rgs, int part_count) {
        std::vector<PointSet> parts(part_count);
        for (std::size_t i = 0; i < rgs.size(); ++i)
            parts[rgs[i]].push_back(static_cast<PointId>(i));
        InnerBest inner = best_assembly(model, fm, parts);
        if (!any || inner.value < min_value) {
            any = true;
            min_value = inner.value;
            min_parts = parts;
            min_best = inner;
        }
        if (inner.value <= epsilon) {
            verdict.holds = false;
            min_value = inner.value;  // first refuting partition is the certificate
            min_parts = parts;
            min_best = inner;
            return false;
        }
        return true;
    });

    verdict.value = min_value;
    verdict.certificate.kind = "mc3-partition";
    verdict.certificate.partition = min_parts;
    verdict.certificate.tags = min_best.tags;
    if (min_best.functional >= 0)
        verdict.certificate.functional = fm.functionals[min_best.functional].first;
    return verdict;
}

Rational mc3_partition_value(const GroundModel& model, const IndicatorFunctionModel& fm,
                             const std::vector<PointSet>& parts) {
    validate_indicator_model(model, fm);
    validate_partition(model, parts);
    return best_assembly(model, fm, parts).value;
}

Rational mc3_threshold(const GroundModel& model, const IndicatorFunctionModel& fm,
                       const DecideOptions& options) {
    check_decide_inputs(model, fm, options);
    bool any = false;
    Rational min_value;
    for_each_partition(model.point_count(), [&](std::span<const int> rgs, int part_count) {
        std::vector<PointSet> parts(part_count);
        for (std::size_t i = 0; i < rgs.size(); ++i)
            parts[rgs[i]].push_back(static_cast<PointId>(i));
        Rational value = best_assembly(model, fm, parts).value;
        if (!any || value < min_value) {
            any = true;
            min_value = value;
        }
        return true;
    });
    if (!any) throw InvariantError("partition sweep visited nothing");
    return min_value;
}

// ---------------------------------------------------------------------------
// signature selection

GammaSelection gamma_select(const GroundModel& model, const std::vector<PointSet>& classes,
                            const std::vector<PointSet>& parts, const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must satisfy 0 < epsilon < 1");
    validate_partition(model, classes);
    validate_partition(model, parts);

    // signature of a class: the parts it meets
    std::map<std::vector<int>, std::vector<int>> by_signature;  // signature -> class indices
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<int> sig;
        for (std::size_t m = 0; m < parts.size(); ++m)
            if (sets_intersect(classes[c], parts[m])) sig.push_back(static_cast<int>(m));
        by_signature[sig].push_back(static_cast<int>(c));
    }

    for (const auto& [sig, members] : by_signature) {
        PointSet classes_union;
        for (int c : members) classes_union = set_union(classes_union, classes[c]);
        if (!(model.outer_measure(classes_union) > epsilon)) continue;

        GammaSelection out;
        out.signature = sig;
        out.finite_b = sig;  // already finite; B = A
        out.gamma = members.front() + 1;
        const PointSet& chosen = classes[members.front()];
        for (int m : sig) out.member.push_back(set_intersection(chosen, parts[m]).front());
        out.member = normalized(std::move(out.member));
        out.value = partition_value(model, parts, out.member);
        if (!(out.value > epsilon))
            throw InvariantError("signature selection lost the outer-measure bound");
        return out;
    }
    throw InputError("hypothesis fails: no signature's class union has outer measure > epsilon");
}

// ---------------------------------------------------------------------------
// cube witness

CubeModel make_cube(int kappa, std::vector<std::vector<int>> classes) {
    if (kappa < 1 || kappa > 62) throw InputError("kappa must be in [1, 62]");
    CubeModel cube;
    cube.kappa = kappa;
    std::vector<char> seen(kappa + 1, 0);
    for (auto& cls : classes) {
        cls = normalized(std::move(cls));
        if (cls.empty()) throw InputError("cube classes must be nonempty");
        std::uint64_t mask = 0;
        for (int g : cls) {
            if (g < 1 || g > kappa)
                throw InputError("coordinate " + std::to_string(g) + " outside 1..kappa");
            if (seen[g])
                throw InputError("coordinate " + std::to_string(g) + " in two classes");
            seen[g] = 1;
            mask |= std::uint64_t{1} << (g - 1);
        }
        cube.class_masks.push_back(mask);
        cube.classes.push_back(cls);
    }
    for (int g = 1; g <= kappa; ++g)
        if (!seen[g])
            throw InputError("coordinate " + std::to_string(g) + " belongs to no class");
    return cube;
}

bool cube_in_d(const CubeModel& cube, int alpha, CubePoint x) {
    if (alpha < 1 || alpha > static_cast<int>(cube.classes.size()))
        throw InputError("unknown class index " + std::to_string(alpha));
    return (x & cube.class_masks[alpha - 1]) == 0;
}

bool cube_in_e(const CubeModel& cube, int alpha, CubePoint x) {
    if (!cube_in_d(cube, alpha, x)) return false;
    for (int beta = 1; beta < alpha; ++beta)
        if (cube_in_d(cube, beta, x)) return false;
    return true;
}

CubePoint cube_witness(const CubeModel& cube, const CubeAssignment& fixed, int beta) {
    if (beta < 1 || beta > static_cast<int>(cube.classes.size()))
        throw InputError("unknown class index " + std::to_string(beta));
    std::uint64_t fixed_mask = 0, fixed_bits = 0;
    for (const auto& [coord, bit] : fixed) {
        if (coord < 1 || coord > cube.kappa)
            throw InputError("fixed coordinate " + std::to_string(coord) + " outside 1..kappa");
        if (bit != 0 && bit != 1) throw InputError("fixed bits must be 0 or 1");
        std::uint64_t m = std::uint64_t{1} << (coord - 1);
        if ((fixed_mask & m) != 0 && ((fixed_bits & m) != 0) != (bit == 1))
            throw InputError("coordinate " + std::to_string(coord) + " fixed both ways");
        fixed_mask |= m;
        if (bit) fixed_bits |= m;
    }

    // classes the cylinder touches
    std::vector<int> touched;
    for (std::size_t a = 0; a < cube.classes.size(); ++a)
        if (cube.class_masks[a] & fixed_mask) touched.push_back(static_cast<int>(a) + 1);
    for (int a : touched)
        if (a == beta)
            throw InputError("class " + std::to_string(beta) +
                             " is touched by the cylinder; pick a class the constraints avoid");

    const std::uint64_t full = (cube.kappa == 62) ? ~std::uint64_t{0} >> 2
                                                  : (std::uint64_t{1} << cube.kappa) - 1;
    // the maximal compatible point: fixed bits as given, ones elsewhere
    CubePoint z = (full & ~fixed_mask) | fixed_bits;
    for (int a : touched)
        if (cube_in_d(cube, a, z))
            throw InputError("no compatible point avoids D_" + std::to_string(a) +
                             ": the cylinder zeroes that whole class");

    std::uint64_t touched_mask = 0;
    for (int a : touched) touched_mask |= cube.class_masks[a - 1];
    CubePoint x = (z & touched_mask) | (full & ~touched_mask & ~cube.class_masks[beta - 1]);

    if ((x & fixed_mask) != fixed_bits)
        throw InvariantError("cube witness left the cylinder");
    if (!cube_in_e(cube, beta, x)) throw InvariantError("cube witness missed E_beta");
    for (std::size_t a = 1; a <= cube.classes.size(); ++a)
        if (static_cast<int>(a) != beta && cube_in_d(cube, static_cast<int>(a), x))
            throw InvariantError("cube witness fell into a foreign D class");
    return x;
}

// ---------------------------------------------------------------------------
// uniform-control partition

void validate_ortho(const GroundModel& model, const OrthoSystem& ortho, const Rational& epsilon) {
    if (ortho.dimension < 1 || ortho.dimension > 62)
        throw InputError("dimension must be in [1, 62]");
    std::vector<char> seen(ortho.dimension + 1, 0);
    for (const auto& group : ortho.groups)
        for (int v : group) {
            if (v < 1 || v > ortho.dimension)
                throw InputError("vector index " + std::to_string(v) + " outside 1..dimension");
            if (seen[v]) throw InputError("vector " + std::to_string(v) + " in two groups");
            seen[v] = 1;
        }
    for (int v = 1; v <= ortho.dimension; ++v)
        if (!seen[v]) throw InputError("vector " + std::to_string(v) + " belongs to no group");

    if (static_cast<int>(ortho.vector_of_point.size()) != model.point_count())
        throw InputError("the injection must assign a vector to every point");
    std::vector<char> used(ortho.dimension + 1, 0);
    for (int v : ortho.vector_of_point) {
        if (v < 1 || v > ortho.dimension)
            throw InputError("injection target " + std::to_string(v) + " outside 1..dimension");
        if (used[v]) throw InputError("injection is not one-to-one at vector " + std::to_string(v));
        used[v] = 1;
    }

    // control bound: at most m basis coefficients above epsilon can land
    // in group m. A unit functional can push k coefficients above epsilon
    // iff k*eps^2 < 1 (Bessel), so the worst count is min(|I_m|, that k).
    BigInt num = numerator(epsilon), den = denominator(epsilon);
    BigInt bessel = (den * den - 1) / (num * num);
    for (std::size_t m = 1; m <= ortho.groups.size(); ++m) {
        BigInt worst = std::min(BigInt(ortho.groups[m - 1].size()), bessel);
        if (worst > BigInt(m))
            throw InputError("group " + std::to_string(m) + " can expose " + worst.str() +
                             " coefficients above epsilon, more than its index allows; "
                             "regroup so |I_m| <= m or epsilon^2*m >= 1");
    }
}

UecResult uec_partition(const GroundModel& model, const OrthoSystem& ortho,
                        const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must satisfy 0 < epsilon < 1");
    validate_ortho(model, ortho, epsilon);

    UecResult result;
    result.epsilon = epsilon;
    result.norm_bound_sq = 4 * epsilon * epsilon;

    std::vector<int> group_of_vector(ortho.dimension + 1, 0);
    for (std::size_t m = 0; m < ortho.groups.size(); ++m)
        for (int v : ortho.groups[m]) group_of_vector[v] = static_cast<int>(m) + 1;

    // group preimages, then one cell per block of each preimage's hull;
    // every cover block must obey mu <= eps/(2^m m)
    for (std::size_t m = 1; m <= ortho.groups.size(); ++m) {
        PointSet omega;
        for (PointId p = 0; p < model.point_count(); ++p)
            if (static_cast<std::size_t>(group_of_vector[ortho.vector_of_point[p]]) == m)
                omega.push_back(p);
        if (omega.empty()) continue;
        Rational cap = epsilon / (Rational(BigInt(1) << m) * static_cast<int>(m));
        MeasurableSet hull = model.hull(omega);
        int n = 0;
        for (BlockId b : hull) {
            if (model.block(b).measure > cap)
                throw InputError("block " + std::to_string(b) + " has measure " +
                                 format_rational(model.block(b).measure) +
                                 " > eps/(2^m m) = " + format_rational(cap) + " for group " +
                                 std::to_string(m) + "; refine_block it first");
            PointSet cell;
            for (PointId p : omega)
                if (model.block_of(p) == b) cell.push_back(p);
            result.parts.push_back(cell);
            result.covers.push_back({b});
            result.cell_labels.emplace_back(static_cast<int>(m), ++n);
        }
    }
    validate_partition(model, result.parts);

    // scale all block measures to integers
    BigInt q = 1;
    for (const MeasurableSet& cover : result.covers)
        q = lcm(q, denominator(model.block(cover.front()).measure));
    if (q > 1'000'000)
        throw ResourceError("cover measures need denominator " + q.str() +
                            "; the certification sweep expects <= 1e6");
    const std::int64_t scale = static_cast<std::int64_t>(q);
    std::vector<std::int64_t> cell_mass(result.parts.size());
    for (std::size_t c = 0; c < result.parts.size(); ++c) {
        Rational scaled = model.block(result.covers[c].front()).measure * scale;
        cell_mass[c] = static_cast<std::int64_t>(numerator(scaled));
    }

    // functional grid: +-basis plus every +-1/sqrt(k) sign pattern, up to
    // global sign; evaluated exactly by comparing squares
    const int d = ortho.dimension;
    if (d > 16) throw ResourceError("functional grid over dimension > 16 is not swept");
    struct GridFunctional {
        std::uint32_t pos, neg;
        int support;
    };
    std::vector<GridFunctional> grid;
    for (std::uint32_t support = 1; support < (std::uint32_t{1} << d); ++support) {
        int k = std::popcount(support);
        std::uint32_t low = support & (~support + 1);
        for (std::uint32_t sub = 0;; sub = (sub - support) & support) {
            if (!(sub & low))  // first nonzero coordinate positive: mod global sign
                grid.push_back({support & ~sub, sub, k});
            if (sub == support) break;
        }
    }
    result.functionals_swept = grid.size();
    result.grid = "all +-basis duals and all +-1/sqrt(k) sign patterns, k <= " +
                  std::to_string(d) + ", modulo global sign (" +
                  std::to_string(grid.size()) + " functionals)";

    // per-functional control counts: tags in group m with coefficient
    // above epsilon, at most m of them (epsilon < 1 so basis hits count)
    {
        BigInt num = numerator(epsilon), den = denominator(epsilon);
        for (const GridFunctional& g : grid) {
            bool above = BigInt(g.support) * num * num < den * den;  // 1/k > eps^2
            if (!above) continue;
            std::vector<int> count(ortho.groups.size() + 1, 0);
            for (PointId p = 0; p < model.point_count(); ++p) {
                int v = ortho.vector_of_point[p];
                if ((g.pos | g.neg) & (std::uint32_t{1} << (v - 1)))
                    ++count[group_of_vector[v]];
            }
            for (std::size_t m = 1; m <= ortho.groups.size(); ++m)
                if (count[m] > static_cast<int>(m))
                    throw InvariantError("control count exceeded in group " + std::to_string(m));
        }
    }

    // exhaustive assemblies: each cell contributes nothing or its whole
    // cover block under one of its tags; coordinates accumulate in int64
    const std::size_t cells = result.parts.size();
    std::uint64_t assemblies = 1;
    for (const PointSet& cell : result.parts) {
        assemblies *= cell.size() + 1;
        if (assemblies > 2'000'000)
            throw ResourceError("assembly sweep exceeds 2e6 combinations");
    }

    const Rational bound_scaled = result.norm_bound_sq * scale * scale;  // compare norms^2
    std::vector<std::int64_t> coords(d + 1, 0);
    std::int64_t norm_sq = 0;
    std::int64_t max_norm_sq = 0;
    bool ok = true;

    auto check_functionals = [&]() {
        for (const GridFunctional& g : grid) {
            std::int64_t dot = 0;
            for (std::uint32_t rest = g.pos; rest;) {
                int v = std::countr_zero(rest) + 1;
                rest &= rest - 1;
                dot += coords[v];
            }
            for (std::uint32_t rest = g.neg; rest;) {
                int v = std::countr_zero(rest) + 1;
                rest &= rest - 1;
                dot -= coords[v];
            }
            // |dot| / (sqrt(k) * scale) <= 2 eps  <=>  dot^2 <= 4 eps^2 k scale^2
            if (Rational(dot) * dot > bound_scaled * g.support) return false;
        }
        return true;
    };

    auto sweep = [&](auto&& self, std::size_t cell) -> void {
        if (!ok) return;
        if (cell == cells) {
            ++result.assemblies_swept;
            max_norm_sq = std::max(max_norm_sq, norm_sq);
            if (Rational(norm_sq) > bound_scaled || !check_functionals()) ok = false;
            return;
        }
        self(self, cell + 1);  // cell absent
        for (PointId tag : result.parts[cell]) {
            int v = ortho.vector_of_point[tag];
            norm_sq -= coords[v] * coords[v];
            coords[v] += cell_mass[cell];
            norm_sq += coords[v] * coords[v];
            self(self, cell + 1);
            norm_sq -= coords[v] * coords[v];
            coords[v] -= cell_mass[cell];
            norm_sq += coords[v] * coords[v];
        }
    };
    sweep(sweep, 0);

    result.certified = ok;
    result.max_norm_sq = Rational(max_norm_sq) / (Rational(scale) * scale);
    return result;
}

}  // namespace mcfill
