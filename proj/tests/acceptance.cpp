// Acceptance suite: one pass/fail line per criterion, every tolerance
// exact and pinned here. Exit code = number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcfill/dyadic.hpp"
#include "mcfill/errors.hpp"
#include "mcfill/integration.hpp"
#include "mcfill/json_io.hpp"
#include "mcfill/mcfilling.hpp"

using namespace mcfill;
namespace fs = std::filesystem;

namespace {

struct Runner {
    int failures = 0;

    void criterion(int number, const std::string& title,
                   const std::function<std::string()>& body, long long budget_ms = 0) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (ok && budget_ms > 0 && ms > budget_ms) {
            ok = false;
            detail += "; exceeded the " + std::to_string(budget_ms) + " ms budget";
        }
        std::printf("[%s] criterion %2d: %s (%s; %lld ms)\n", ok ? "PASS" : "FAIL", number,
                    title.c_str(), detail.c_str(), static_cast<long long>(ms));
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

struct Failure : std::runtime_error {
    explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool condition, const std::string& what) {
    if (!condition) throw Failure(what);
}

Rational rat(const char* s) { return parse_rational(s); }

// ---------------------------------------------------------------------------
// shared corpus: all point->block assignments over canonical measure menus

struct CorpusModel {
    GroundModel model;
    std::string label;
};

std::vector<CorpusModel> block_model_corpus(int max_points) {
    static const std::vector<std::vector<const char*>> menus{
        {"1"},
        {"1/2", "1/2"},
        {"1", "0"},
        {"1/3", "2/3"},
        {"1/3", "1/3", "1/3"},
        {"1/2", "1/4", "1/4"},
        {"1/2", "1/2", "0"},
        {"2/3", "1/6", "1/6"},
    };
    std::vector<CorpusModel> corpus;
    for (std::size_t menu_id = 0; menu_id < menus.size(); ++menu_id) {
        const auto& menu = menus[menu_id];
        const int b = static_cast<int>(menu.size());
        for (int points = 0; points <= max_points; ++points) {
            std::vector<int> assignment(points, 0);
            while (true) {
                std::vector<Block> blocks(b);
                for (int i = 0; i < b; ++i) blocks[i].measure = parse_rational(menu[i]);
                for (int p = 0; p < points; ++p) blocks[assignment[p]].points.push_back(p);
                corpus.push_back({GroundModel::make(std::move(blocks)),
                                  "menu" + std::to_string(menu_id) + "/p" +
                                      std::to_string(points)});
                int i = points - 1;
                while (i >= 0 && assignment[i] == b - 1) assignment[i--] = 0;
                if (i < 0) break;
                ++assignment[i];
            }
        }
    }
    return corpus;
}

// 200 seeded hereditary families over at most 5 abstract points
std::vector<std::unique_ptr<HereditaryFamily>> seeded_families(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::unique_ptr<HereditaryFamily>> families;
    families.push_back(std::make_unique<ExplicitFamily>(std::vector<std::vector<int>>{}));
    families.push_back(
        std::make_unique<ExplicitFamily>(std::vector<std::vector<int>>{{}}));
    families.push_back(std::make_unique<AllSubsetsFamily>());
    while (static_cast<int>(families.size()) < count) {
        switch (rng() % 3) {
            case 0: {
                std::vector<std::vector<int>> generators;
                int g = 1 + static_cast<int>(rng() % 3);
                for (int i = 0; i < g; ++i) {
                    std::vector<int> gen;
                    for (int p = 0; p < 5; ++p)
                        if (rng() % 2) gen.push_back(p);
                    generators.push_back(gen);
                }
                families.push_back(std::make_unique<ExplicitFamily>(generators));
                break;
            }
            case 1: {
                int classes = 1 + static_cast<int>(rng() % 3);
                std::vector<std::vector<int>> split(classes);
                for (int p = 0; p < 5; ++p) split[rng() % classes].push_back(p);
                families.push_back(std::make_unique<PartitionFamily>(split));
                break;
            }
            default:
                families.push_back(
                    std::make_unique<SizeAtMostFamily>(static_cast<int>(rng() % 4)));
        }
    }
    return families;
}

std::string with_count(std::uint64_t count, const std::string& what) {
    return std::to_string(count) + " " + what;
}

// certificates collected across the suite, replayed in criterion 12
struct CollectedCertificate {
    const GroundModel* model;
    const HereditaryFamily* family;
    const IndicatorFunctionModel* fm;
    Verdict verdict;
};

std::vector<CorpusModel> g_corpus5;                       // <= 5 points
std::vector<std::unique_ptr<HereditaryFamily>> g_families;
std::vector<CollectedCertificate> g_certificates;
std::vector<std::unique_ptr<IndicatorFunctionModel>> g_fm_store;

}  // namespace

// ---------------------------------------------------------------------------

static std::string criterion1() {
    std::uint64_t checked = 0;
    for (unsigned mask = 1; mask < (1u << 12); ++mask) {
        std::vector<int> h;
        for (int i = 0; i < 12; ++i)
            if (mask & (1u << i)) h.push_back(i + 1);
        std::vector<int> top = schreier_extract(h);
        require(schreier_contains(top), "extracted set is not Schreier");
        require(is_subset(top, h), "extracted set leaves H");
        require(2 * top.size() >= h.size(), "extracted set is smaller than |H|/2");
        ++checked;
    }
    require(checked == 4095, "expected 4095 nonempty subsets");
    return with_count(checked, "subsets of {1..12} verified");
}

static std::string criterion2() {
    // every meet-closed subset of the depth-4 tree (codes 1..31), by
    // include/exclude recursion in code order; a prefix stays valid iff
    // every included pair's meet is already included
    std::uint64_t checked = 0;
    std::vector<NodeCode> current;
    std::uint32_t member_mask = 0;  // bit c-1 = code c included

    auto ancestors_in = [&](NodeCode c) {
        int count = 0;
        for (NodeCode a = c; a >= 1; a >>= 1)
            if (member_mask & (1u << (a - 1))) ++count;
        return count;
    };

    std::function<void(NodeCode)> walk = [&](NodeCode next) {
        if (next > 31) {
            if (current.empty()) return;
            ++checked;
            std::vector<NodeCode> chain = chain_extract(current);
            std::size_t need = 1, power = 1;
            while (power * 2 <= current.size()) {
                power *= 2;
                ++need;
            }
            require(chain.size() >= need, "chain shorter than floor(log2|C|)+1");
            int longest = 0;
            for (NodeCode c : current) longest = std::max(longest, ancestors_in(c));
            require(static_cast<int>(chain.size()) <= longest,
                    "chain beats the exhaustive longest chain");
            for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                require(is_prefix(chain[i], chain[i + 1]), "output is not a chain");
            for (NodeCode c : chain)
                require((member_mask & (1u << (c - 1))) != 0, "chain left the input set");
            return;
        }
        walk(next + 1);  // exclude
        bool valid = true;
        for (NodeCode c : current) {
            NodeCode meet = node_meet(next, c);
            if (meet != next && meet != c && !(member_mask & (1u << (meet - 1)))) {
                valid = false;
                break;
            }
        }
        if (valid) {
            current.push_back(next);
            member_mask |= 1u << (next - 1);
            walk(next + 1);
            member_mask &= ~(1u << (next - 1));
            current.pop_back();
        }
    };
    walk(1);
    require(checked == 15745021, "meet-closed subset count of the depth-4 tree is 15745021");
    return with_count(checked, "meet-closed sets, chains cross-checked");
}

static std::string criterion3() {
    std::mt19937_64 rng(0xd1ad5eedull);
    const int length = 16;
    std::uint64_t checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int size = 2 + static_cast<int>(rng() % 63);
        std::vector<NodeCode> leaves;
        while (static_cast<int>(leaves.size()) < size) {
            NodeCode leaf = (1 << length) | static_cast<NodeCode>(rng() & 0xffff);
            if (std::find(leaves.begin(), leaves.end(), leaf) == leaves.end())
                leaves.push_back(leaf);
        }
        DyadicExtraction extraction = dyadicD_extract(leaves, length);
        std::vector<NodeCode> sorted(leaves.begin(), leaves.end());
        std::sort(sorted.begin(), sorted.end());
        require(is_subset(extraction.member, sorted), "member leaves the input set");
        require(dyadicD_contains(extraction.member, length),
                "independent membership recheck failed");
        require(BigInt(1) << (2 * (extraction.member.size() - 1)) > BigInt(size) - 1,
                "strict size bound violated");
        ++checked;
    }
    return with_count(checked, "seeded extractions certified");
}

static std::string criterion4() {
    // the 32-leaf pool: every leaf of width 5
    const int length = 5;
    std::vector<NodeCode> pool;
    for (NodeCode c = 1 << length; c < (1 << (length + 1)); ++c) pool.push_back(c);
    std::uint64_t checked = 0;
    std::vector<NodeCode> subset;
    std::function<void(std::size_t)> walk = [&](std::size_t from) {
        if (subset.size() >= 1) {
            std::vector<NodeCode> v = v_set(subset, length);
            require(v.size() == subset.size() - 1, "|v(A)| != |A|-1");
            for (NodeCode a : v)
                for (NodeCode b : v)
                    require(set_contains(v, node_meet(a, b)), "v(A) is not meet-closed");
            ++checked;
        }
        if (subset.size() == 5) return;
        for (std::size_t i = from; i < pool.size(); ++i) {
            subset.push_back(pool[i]);
            walk(i + 1);
            subset.pop_back();
        }
    };
    walk(0);
    return with_count(checked, "leaf sets of size <= 5 verified");
}

static std::string criterion5() {
    const std::vector<Rational> epsilons{rat("1/4"), rat("1/2"), rat("3/4")};
    std::uint64_t agreements = 0, full_checks = 0;
    std::size_t combo = 0;
    for (const CorpusModel& entry : g_corpus5) {
        for (const auto& family : g_families) {
            Rational ta = mc_filling_threshold(entry.model, *family);
            Rational tb = mc_filling_threshold_covers(entry.model, *family);
            require(ta == tb, "route thresholds differ on " + entry.label);
            agreements += epsilons.size();
            if (combo++ % 101 == 0) {
                for (const Rational& eps : epsilons) {
                    Verdict a = check_mc_filling(entry.model, *family, eps);
                    Verdict b = check_mc_filling_covers(entry.model, *family, eps);
                    require(a.holds == b.holds, "checker verdicts differ on " + entry.label);
                    require(a.holds == (ta > eps), "checker disagrees with its threshold");
                    ++full_checks;
                    if (!a.holds) {
                        g_certificates.push_back({&entry.model, family.get(), nullptr, a});
                        g_certificates.push_back({&entry.model, family.get(), nullptr, b});
                    }
                }
            }
        }
    }
    return std::to_string(g_corpus5.size()) + " models x " +
           std::to_string(g_families.size()) + " families, " +
           with_count(agreements, "epsilon comparisons + ") +
           with_count(full_checks, "full checker runs");
}

static std::string criterion6() {
    DecideOptions relaxed;
    relaxed.require_null = false;
    const std::vector<Rational> epsilons{rat("1/4"), rat("1/2"), rat("3/4")};
    std::uint64_t pairs = 0;

    auto compare = [&](const GroundModel& model, const std::vector<PointSet>& classes) {
        auto fm = std::make_unique<IndicatorFunctionModel>(
            c0_model_from_partition(model, classes));
        std::vector<std::vector<int>> class_vectors(classes.begin(), classes.end());
        auto family = std::make_unique<PartitionFamily>(class_vectors);
        Rational decide_threshold = mc3_threshold(model, *fm, relaxed);
        Rational filling_threshold = mc_filling_threshold(model, *family);
        require(decide_threshold == filling_threshold, "thresholds split");
        for (const Rational& eps : epsilons) {
            Verdict d = decide_mc_integrability(model, *fm, eps, relaxed);
            Verdict c = check_mc_filling(model, *family, eps);
            require(d.holds == c.holds, "decide and check disagree");
            if (!d.holds) {
                g_fm_store.push_back(std::move(fm));
                fm = std::make_unique<IndicatorFunctionModel>(
                    c0_model_from_partition(model, classes));
                g_certificates.push_back({&model, nullptr, g_fm_store.back().get(), d});
            }
        }
        g_fm_store.push_back(std::move(fm));
        ++pairs;
    };

    // exhaustive: every corpus model with <= 4 points, every class partition
    for (const CorpusModel& entry : g_corpus5) {
        if (entry.model.point_count() > 4) continue;
        if (entry.model.point_count() == 0) continue;
        for_each_partition(entry.model.point_count(), [&](std::span<const int> rgs, int parts) {
            std::vector<PointSet> classes(parts);
            for (std::size_t i = 0; i < rgs.size(); ++i)
                classes[rgs[i]].push_back(static_cast<PointId>(i));
            compare(entry.model, classes);
            return true;
        });
    }

    // 100 seeded instances at 5-6 points
    std::mt19937_64 rng(0xdec1d5eedull);
    static std::vector<GroundModel> seeded_models;
    seeded_models.reserve(100);  // certificates keep pointers into this
    for (int trial = 0; trial < 100; ++trial) {
        int points = 5 + static_cast<int>(rng() % 2);
        static const std::vector<std::vector<const char*>> menus{
            {"1/2", "1/2"}, {"1/3", "1/3", "1/3"}, {"1/2", "1/4", "1/4"}, {"1/2", "1/2", "0"}};
        const auto& menu = menus[rng() % menus.size()];
        std::vector<Block> blocks(menu.size());
        for (std::size_t b = 0; b < menu.size(); ++b) blocks[b].measure = parse_rational(menu[b]);
        for (int p = 0; p < points; ++p) blocks[rng() % menu.size()].points.push_back(p);
        seeded_models.push_back(GroundModel::make(std::move(blocks)));
        int class_count = 1 + static_cast<int>(rng() % 3);
        std::vector<PointSet> classes(class_count);
        for (int p = 0; p < points; ++p) classes[rng() % class_count].push_back(p);
        compare(seeded_models.back(), classes);
    }
    return with_count(pairs, "(model, class-partition) pairs matched");
}

static std::string criterion7() {
    std::uint64_t families_checked = 0;
    // the shared corpus covers up to 3 blocks; add 4-block models here
    std::vector<CorpusModel> four_block;
    for (const char* menu : {"even", "skew"}) {
        std::vector<const char*> measures =
            std::string(menu) == "even"
                ? std::vector<const char*>{"1/4", "1/4", "1/4", "1/4"}
                : std::vector<const char*>{"1/2", "1/4", "1/8", "1/8"};
        for (int points = 1; points <= 3; ++points) {
            std::vector<int> assignment(points, 0);
            while (true) {
                std::vector<Block> blocks(4);
                for (int b = 0; b < 4; ++b) blocks[b].measure = parse_rational(measures[b]);
                for (int p = 0; p < points; ++p) blocks[assignment[p]].points.push_back(p);
                four_block.push_back({GroundModel::make(std::move(blocks)), menu});
                int i = points - 1;
                while (i >= 0 && assignment[i] == 3) assignment[i--] = 0;
                if (i < 0) break;
                ++assignment[i];
            }
        }
    }
    std::vector<const CorpusModel*> corpus;
    for (const CorpusModel& entry : g_corpus5) corpus.push_back(&entry);
    for (const CorpusModel& entry : four_block) corpus.push_back(&entry);

    for (const CorpusModel* entry_ptr : corpus) {
        const GroundModel& model = entry_ptr->model;
        if (model.block_count() > 4 || model.point_count() == 0 || model.point_count() > 4)
            continue;
        // one indicator family per model keeps the sweep exhaustive yet fast
        std::vector<std::vector<int>> generators{{}, {}};
        for (int p = 0; p < model.point_count(); ++p) generators[p % 2].push_back(p);
        ExplicitFamily family(generators);
        IndicatorFunctionModel fm = build_indicator_model(model, family);

        // every tagged family: each block carries no piece or one piece
        // tagged by any point
        const int options = model.point_count() + 1;
        std::vector<int> choice(model.block_count(), 0);
        while (true) {
            TaggedFamily tagged;
            for (BlockId b = 0; b < model.block_count(); ++b)
                if (choice[b] > 0) tagged.push_back({{b}, choice[b] - 1});
            // direct per-functional summation, the oracle
            Rational direct = 0;
            for (const auto& [name, set] : fm.functionals) {
                Rational total = 0;
                for (const TaggedPiece& piece : tagged)
                    if (set_contains(set, piece.tag)) total += model.measure(piece.piece);
                if (total > direct) direct = total;
            }
            require(riemann_norm(model, fm, tagged).value == direct,
                    "explicit route deviates from the summation oracle");
            require(riemann_norm_family(model, family, tagged).value == direct,
                    "family route deviates from the summation oracle");
            ++families_checked;
            int i = model.block_count() - 1;
            while (i >= 0 && choice[i] == options - 1) choice[i--] = 0;
            if (i < 0) break;
            ++choice[i];
        }
    }
    return with_count(families_checked, "tagged families checked on both routes");
}

static std::string criterion8() {
    std::mt19937_64 rng(0x41b05eedull);
    const Rational eta1 = rat("1/10");
    std::uint64_t runs = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int part_count = 1 + static_cast<int>(rng() % 3);
        const int blocks = 40 * part_count + 1 + static_cast<int>(rng() % 8);
        std::vector<Block> spec(blocks);
        for (int b = 0; b < blocks; ++b) spec[b] = {Rational(1, blocks), {b}};
        GroundModel model = GroundModel::make(std::move(spec));
        PointSet a = model.all_points();  // full transversal: one point per block

        // parts are contiguous block ranges, every one at least two blocks
        std::vector<PointSet> parts(part_count);
        const int stride = (blocks + part_count - 1) / part_count;
        for (int b = 0; b < blocks; ++b)
            parts[std::min(part_count - 1, b / stride)].push_back(b);

        const Rational eps = (rng() % 2) ? rat("1/4") : rat("1/2");
        std::unique_ptr<HereditaryFamily> family;
        if (rng() % 2) {
            family = std::make_unique<AllSubsetsFamily>();
        } else {
            // size cap >= eps*|A| keeps the family eps-filling on A
            BigInt cap = (numerator(eps) * blocks + denominator(eps) - 1) / denominator(eps);
            family = std::make_unique<SizeAtMostFamily>(cap.convert_to<int>() + 1);
        }

        PipelineResult result =
            filling_to_mc_pipeline(model, a, *family, eps, eta1, parts);
        Rational bound = eps * (result.eta - eta1);
        require(result.selection.value > bound, "pipeline bound missed");
        // independent replay through both partition evaluators
        Rational via_covers = cover_value(model, parts, result.covers, result.selection.member);
        Rational via_parts = partition_value(model, parts, result.selection.member);
        require(via_covers == result.selection.value, "cover replay deviates");
        require(via_parts == result.selection.value, "hull covers must match the part payoff");
        ++runs;
    }
    return with_count(runs, "seeded pipeline runs certified (eta1 = 1/10)");
}

static std::string criterion9() {
    std::mt19937_64 rng(0x97eed5eedull);
    std::uint64_t runs = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int blocks = 3 + static_cast<int>(rng() % 6);       // <= 8 blocks
        const int classes = 2 + static_cast<int>(rng() % 3);     // <= 4 classes
        std::vector<Block> spec(blocks);
        std::vector<PointSet> fibers(classes);
        int next = 0;
        for (int b = 0; b < blocks; ++b) {
            spec[b].measure = Rational(1, blocks);
            for (int c = 0; c < classes; ++c) {
                spec[b].points.push_back(next);
                fibers[c].push_back(next);
                ++next;
            }
        }
        GroundModel model = GroundModel::make(std::move(spec));
        const int part_count = 2 + static_cast<int>(rng() % std::min(2, classes - 1));
        std::vector<PointSet> parts(part_count);
        for (PointId p = 0; p < model.point_count(); ++p)
            parts[std::min<int>(part_count - 1,
                                model.block_of(p) / std::max(1, blocks / part_count))]
                .push_back(p);

        std::unique_ptr<HereditaryFamily> family;
        if (rng() % 3 == 0)
            family = std::make_unique<SizeAtMostFamily>(part_count + static_cast<int>(rng() % 2),
                                                        GroundKind::Naturals);
        else
            family = std::make_unique<AllSubsetsFamily>(GroundKind::Naturals);
        const Rational eps = (rng() % 2) ? rat("1/4") : rat("1/2");

        GreedyResult result =
            greedy_select(model, TransversalSystem{fibers}, *family, parts, eps);

        // the postcondition triple
        std::vector<int> phi = result.class_sequence;
        require(normalized(phi).size() == result.member.size(), "phi not injective on F");
        require(family->contains(normalized(phi)), "phi(F) left the class family");
        Rational value = partition_value(model, parts, result.member);
        require(value == result.value, "reported value does not replay");
        require(value > eps, "outer-measure bound missed");

        // exhaustive search over admissible F: at most one point per class
        Rational best = 0;
        std::function<void(std::size_t, std::vector<int>&, std::vector<int>&)> search =
            [&](std::size_t cls, std::vector<int>& chosen_classes, std::vector<int>& points) {
                if (cls == fibers.size()) {
                    if (points.empty()) return;
                    std::vector<int> image = normalized(chosen_classes);
                    if (!family->contains(image)) return;
                    Rational v = partition_value(model, parts, normalized(points));
                    if (v > best) best = v;
                    return;
                }
                search(cls + 1, chosen_classes, points);
                for (PointId p : fibers[cls]) {
                    chosen_classes.push_back(static_cast<int>(cls) + 1);
                    points.push_back(p);
                    search(cls + 1, chosen_classes, points);
                    points.pop_back();
                    chosen_classes.pop_back();
                }
            };
        std::vector<int> chosen_classes, points;
        search(0, chosen_classes, points);
        require(best >= value, "greedy value exceeds the exhaustive maximum");
        require(best > eps, "exhaustive search contradicts greedy feasibility");
        ++runs;
    }
    return with_count(runs, "seeded instances, postcondition triple + exhaustive cross-check");
}

static std::string criterion10() {
    std::uint64_t verified = 0, rejected = 0;
    for (int kappa = 1; kappa <= 8; ++kappa) {
        // all partitions of {1..kappa} into at most 4 nonempty classes
        std::vector<int> rgs(kappa, 0);
        std::function<void(int, int)> enumerate = [&](int i, int max_seen) {
            if (i == kappa) {
                int class_count = max_seen + 1;
                if (class_count > 4) return;
                std::vector<std::vector<int>> classes(class_count);
                for (int g = 0; g < kappa; ++g) classes[rgs[g]].push_back(g + 1);
                CubeModel cube = make_cube(kappa, classes);
                for (int coord = 1; coord <= kappa; ++coord)
                    for (int bit = 0; bit <= 1; ++bit)
                        for (int beta = 1; beta <= class_count; ++beta) {
                            CubePoint x;
                            try {
                                x = cube_witness(cube, {{coord, bit}}, beta);
                            } catch (const InputError&) {
                                ++rejected;
                                continue;
                            }
                            require(((x >> (coord - 1)) & 1) == static_cast<CubePoint>(bit),
                                    "witness left the cylinder");
                            require(cube_in_e(cube, beta, x), "witness missed E_beta");
                            ++verified;
                        }
                return;
            }
            for (int v = 0; v <= std::min(max_seen + 1, 3); ++v) {
                rgs[i] = v;
                enumerate(i + 1, std::max(max_seen, v));
            }
        };
        enumerate(1, 0);  // rgs[0] = 0 fixed
    }
    return with_count(verified, "witnesses verified, ") + with_count(rejected,
                                                                     "precondition rejections");
}

static std::string criterion11() {
    // eight points on the eight-dimensional orthonormal basis, grouped
    // 1|2|3|2 so each group obeys the control bound; blocks fine enough
    // for every eps/(2^m m) cover cap at eps = 1/2
    std::vector<Block> spec(9);
    for (int b = 0; b < 8; ++b) spec[b] = {rat("1/128"), {b}};
    spec[8] = {rat("120/128"), {}};
    GroundModel model = GroundModel::make(std::move(spec));
    OrthoSystem ortho;
    ortho.dimension = 8;
    ortho.groups = {{1}, {2, 3}, {4, 5, 6}, {7, 8}};
    ortho.vector_of_point = {1, 2, 3, 4, 5, 6, 7, 8};
    UecResult result = uec_partition(model, ortho, rat("1/2"));
    require(result.certified, "bound report did not certify");
    require(result.max_norm_sq <= result.norm_bound_sq, "norm exceeded (2 eps)^2");
    require(result.parts.size() == 8, "expected one cell per point block");
    return with_count(result.assemblies_swept, "assemblies x ") +
           with_count(result.functionals_swept, "functionals certified <= 2*eps");
}

static std::string criterion12() {
    std::uint64_t replayed = 0;
    for (const CollectedCertificate& entry : g_certificates) {
        require(!entry.verdict.holds, "only refutations are collected");
        Rational again =
            replay_certificate(entry.verdict, entry.model, entry.family, entry.fm);
        require(again == entry.verdict.value, "certificate value did not replay");
        require(again <= entry.verdict.epsilon, "replayed refutation fails to refute");
        ++replayed;
    }
    require(replayed >= 100, "expected a substantial certificate corpus");

    // filling refutations replay through the same entry point
    std::vector<int> ground;
    for (int i = 1; i <= 8; ++i) ground.push_back(i);
    FillingOptions options;
    options.max_h = 8;
    for (int cap = 0; cap <= 3; ++cap) {
        SizeAtMostFamily family(cap, GroundKind::Naturals);
        for (const char* eps : {"1/3", "1/2", "2/3"}) {
            Verdict verdict = is_filling(family, ground, rat(eps), options);
            if (verdict.holds) continue;
            Rational again = replay_certificate(verdict, nullptr, &family, nullptr);
            require(again == verdict.value, "filling certificate did not replay");
            require(again < verdict.epsilon, "replayed filling refutation fails to refute");
            ++replayed;
        }
    }

    // end-to-end through the CLI: emit a refutation report, replay it,
    // then reject a tampered copy
    fs::path dir = fs::temp_directory_path() / "mcfill_acceptance";
    fs::create_directories(dir);
    fs::path model = dir / "model.json";
    fs::path family = dir / "family.json";
    fs::path report = dir / "report.json";
    std::ofstream(model) << R"({"blocks":[{"measure":"1/2","points":["a"]},)"
                         << R"({"measure":"1/2","points":["b"]}]})";
    std::ofstream(family) << R"({"kind":"explicit","members":[["a"]]})";

    auto run = [](const std::string& cmd) {
        int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    const std::string cli = MCFILL_CLI_PATH;
    require(run(cli + " check-mcfilling --model " + model.string() + " --family " +
                family.string() + " --epsilon 1/2 --report " + report.string()) == 1,
            "CLI refutation expected");
    require(run(cli + " verify-certificate " + report.string()) == 0,
            "CLI certificate replay failed");
    Json tampered = read_json_file(report.string());
    tampered["payload"]["value"] = "9/10";
    fs::path bad = dir / "tampered.json";
    write_json_file(bad.string(), tampered);
    require(run(cli + " verify-certificate " + bad.string()) == 1,
            "tampered certificate slipped through");
    return with_count(replayed, "refutation certificates replayed + CLI round trip");
}

int main() {
    Runner runner;
    g_corpus5 = block_model_corpus(5);
    g_families = seeded_families(200, 0xfa1115ull);

    runner.criterion(1, "Schreier half-filling extraction over {1..12}", criterion1, 1000);
    runner.criterion(2, "chain extraction on every meet-closed set of the depth-4 tree",
                     criterion2, 30000);
    runner.criterion(3, "certified dyadic extraction, 1000 seeded leaf sets in 2^16",
                     criterion3, 10000);
    runner.criterion(4, "v-set statistics over the 32-leaf pool", criterion4, 10000);
    runner.criterion(5, "cover-variant equivalence across the block-model corpus", criterion5,
                     60000);
    runner.criterion(6, "MC-integrability decision matches the MC-filling checker", criterion6,
                     120000);
    runner.criterion(7, "Riemann norm equals direct summation on exhaustive tagged families",
                     criterion7, 30000);
    runner.criterion(8, "filling-to-MC pipeline meets eps*(eta-eta1) on 50 seeded models",
                     criterion8, 60000);
    runner.criterion(9, "greedy witness engine postconditions on 100 seeded instances",
                     criterion9, 60000);
    runner.criterion(10, "cube witnesses land in Z and E_beta, exhaustively to kappa = 8",
                     criterion10, 60000);
    runner.criterion(11, "uniform-control partition certifies the 2*eps bound", criterion11,
                     30000);
    runner.criterion(12, "every refutation certificate replays (library + CLI)", criterion12);

    if (runner.failures == 0)
        std::printf("all 12 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", runner.failures);
    return runner.failures;
}
