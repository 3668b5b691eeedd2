#include "doctest.h"

#include <random>

#include "mcfill/errors.hpp"
#include "mcfill/mcfilling.hpp"

using namespace mcfill;

namespace {

Rational rat(const char* s) { return parse_rational(s); }

GroundModel two_halves() {
    return GroundModel::make({{rat("1/2"), {0}}, {rat("1/2"), {1}}});
}

std::vector<PointSet> singletons(const GroundModel& m) {
    std::vector<PointSet> parts;
    for (PointId p = 0; p < m.point_count(); ++p) parts.push_back({p});
    return parts;
}

GroundModel random_model(std::mt19937& rng, int max_points, int) {
    static const std::vector<std::vector<const char*>> menus{
        {"1"}, {"1/2", "1/2"}, {"1/2", "1/2", "0"}, {"1/3", "1/3", "1/3"},
        {"1/2", "1/4", "1/4"}, {"2/3", "1/6", "1/6"}};
    const auto& menu = menus[rng() % menus.size()];
    const int blocks = static_cast<int>(menu.size());
    const int points = static_cast<int>(rng() % (max_points + 1));
    std::vector<Block> spec(blocks);
    for (int b = 0; b < blocks; ++b) spec[b].measure = parse_rational(menu[b]);
    for (int p = 0; p < points; ++p) spec[rng() % blocks].points.push_back(p);
    return GroundModel::make(std::move(spec));
}

std::unique_ptr<HereditaryFamily> random_family(std::mt19937& rng, int points) {
    switch (rng() % 4) {
        case 0: return std::make_unique<AllSubsetsFamily>();
        case 1: return std::make_unique<SizeAtMostFamily>(static_cast<int>(rng() % 3));
        case 2: {
            std::vector<std::vector<int>> generators;
            for (int g = 0; g < 2; ++g) {
                std::vector<int> gen;
                for (int p = 0; p < points; ++p)
                    if (rng() % 2) gen.push_back(p);
                generators.push_back(gen);
            }
            return std::make_unique<ExplicitFamily>(generators);
        }
        default: {
            std::vector<std::vector<int>> classes(2);
            for (int p = 0; p < points; ++p) classes[rng() % 2].push_back(p);
            return std::make_unique<PartitionFamily>(classes);
        }
    }
}

}  // namespace

TEST_CASE("mc_value on the worked examples") {
    GroundModel m = two_halves();
    AllSubsetsFamily all;
    McValueResult full = mc_value(m, all, singletons(m));
    CHECK(full.value == 1);

    ExplicitFamily only_a(std::vector<std::vector<int>>{{0}});
    McValueResult half = mc_value(m, only_a, singletons(m));
    CHECK(half.value == rat("1/2"));
    CHECK(half.member == PointSet{0});

    // the coarsest partition pays the whole outer measure of the points
    std::vector<PointSet> coarse{{0, 1}};
    CHECK(mc_value(m, only_a, coarse).value == 1);

    ExplicitFamily empty(std::vector<std::vector<int>>{});
    CHECK(mc_value(m, empty, singletons(m)).value == 0);

    std::vector<PointSet> not_a_partition{{0}};
    CHECK_THROWS_AS(mc_value(m, all, not_a_partition), InputError);
}

TEST_CASE("check_mc_filling thresholds and certificates") {
    GroundModel m = two_halves();
    AllSubsetsFamily all;
    for (const char* eps : {"1/4", "1/2", "3/4", "99/100"})
        CHECK(check_mc_filling(m, all, rat(eps)).holds);

    ExplicitFamily only_a(std::vector<std::vector<int>>{{0}});
    CHECK(check_mc_filling(m, only_a, rat("1/4")).holds);
    Verdict at_half = check_mc_filling(m, only_a, rat("1/2"));
    CHECK_FALSE(at_half.holds);
    CHECK(at_half.value == rat("1/2"));
    CHECK(at_half.value == partition_value(m, at_half.certificate.partition,
                                           at_half.certificate.witness));
    CHECK_FALSE(check_mc_filling(m, only_a, rat("3/4")).holds);
    CHECK(mc_filling_threshold(m, only_a) == rat("1/2"));

    ExplicitFamily trivial(std::vector<std::vector<int>>{{}});
    CHECK_FALSE(check_mc_filling(m, trivial, rat("1/4")).holds);
    ExplicitFamily empty(std::vector<std::vector<int>>{});
    CHECK_FALSE(check_mc_filling(m, empty, rat("1/4")).holds);

    CHECK_THROWS_AS(check_mc_filling(m, all, rat("0")), InputError);
    CHECK_THROWS_AS(check_mc_filling(m, all, rat("1")), InputError);
}

TEST_CASE("cover route agrees with the outer-measure route") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        GroundModel m = random_model(rng, 5, 3);
        auto family = random_family(rng, m.point_count());
        CHECK(mc_filling_threshold(m, *family) == mc_filling_threshold_covers(m, *family));
        for (const char* eps : {"1/4", "1/2", "3/4"}) {
            Verdict a = check_mc_filling(m, *family, rat(eps));
            Verdict b = check_mc_filling_covers(m, *family, rat(eps));
            CHECK(a.holds == b.holds);
            CHECK(a.value == b.value);
        }
    }
    // a few larger sweeps (Bell(7) partitions) through the same pair
    for (int trial = 0; trial < 6; ++trial) {
        GroundModel m = random_model(rng, 7, 3);
        auto family = random_family(rng, m.point_count());
        CHECK(mc_filling_threshold(m, *family) == mc_filling_threshold_covers(m, *family));
    }
}

TEST_CASE("enlarging a cover beyond its hull never hurts the member player") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        GroundModel m = random_model(rng, 4, 3);
        if (m.point_count() == 0) continue;
        auto family = random_family(rng, m.point_count());
        RgsTable table = materialize_partitions(m.point_count());
        std::size_t pick = rng() % table.count;
        auto parts = parts_from_rgs(table.row(pick), table.part_counts[pick]);
        auto covers = hull_covers(m, parts);
        Rational base = cover_mc_value(m, *family, parts, covers).value;
        if (parts.empty()) continue;
        std::size_t grow = rng() % covers.size();
        for (BlockId b = 0; b < m.block_count(); ++b)
            covers[grow] = set_union(covers[grow], MeasurableSet{b});
        CHECK(cover_mc_value(m, *family, parts, covers).value >= base);
    }
}

TEST_CASE("mc_value is monotone in the family and under coarsening") {
    GroundModel m = GroundModel::make(
        {{rat("1/4"), {0}}, {rat("1/4"), {1}}, {rat("1/4"), {2}}, {rat("1/4"), {3}}});
    ExplicitFamily small(std::vector<std::vector<int>>{{0}, {2}});
    ExplicitFamily large(std::vector<std::vector<int>>{{0, 2}, {1}});
    std::vector<PointSet> fine = singletons(m);
    CHECK(mc_value(m, small, fine).value <= mc_value(m, large, fine).value);

    std::vector<PointSet> coarse{{0, 1}, {2, 3}};
    CHECK(mc_value(m, small, fine).value <= mc_value(m, small, coarse).value);
}

TEST_CASE("threaded sweeps match the sequential ones") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        GroundModel m = random_model(rng, 5, 3);
        auto family = random_family(rng, m.point_count());
        McOptions solo;
        McOptions four;
        four.threads = 4;
        CHECK(mc_filling_threshold(m, *family, solo) == mc_filling_threshold(m, *family, four));
        Verdict a = check_mc_filling(m, *family, rat("1/2"), solo);
        Verdict b = check_mc_filling(m, *family, rat("1/2"), four);
        CHECK(a.holds == b.holds);
        CHECK(a.certificate.partition == b.certificate.partition);
    }
}

TEST_CASE("pipeline: full transversal with the all-subsets family") {
    // 41 blocks of 1/41, one point each; coarsest partition
    std::vector<Block> blocks(41);
    for (int b = 0; b < 41; ++b) blocks[b] = {rat("1/41"), {b}};
    GroundModel m = GroundModel::make(std::move(blocks));
    PointSet a = m.all_points();
    std::vector<PointSet> parts{a};

    AllSubsetsFamily all;
    PipelineResult r = filling_to_mc_pipeline(m, a, all, rat("1"), rat("1/10"), parts);
    CHECK(r.eta == 1);
    CHECK(r.selection.value > rat("9/10"));
    CHECK(r.selection.value == cover_value(m, parts, r.covers, r.selection.member));
    CHECK(r.m0 == 1);
    CHECK(r.q == 41);
    CHECK(r.tag_counts[0] == 40);

    // a two-part split of the same model with a half-filling family; eta1
    // large enough that the common denominator stays at the block count
    std::vector<PointSet> split{{}, {}};
    for (PointId p = 0; p < 41; ++p) split[p < 20 ? 0 : 1].push_back(p);
    SizeAtMostFamily wide(21);  // 1/2-filling on any set of at most 42 points
    PipelineResult half = filling_to_mc_pipeline(m, a, wide, rat("1/2"), rat("1/4"), split);
    CHECK(half.m0 == 2);
    CHECK(half.selection.value > rat("1/2") * (half.eta - rat("1/4")));
    CHECK(half.selection.value == cover_value(m, split, half.covers, half.selection.member));
}

TEST_CASE("pipeline input errors: tag shortages and bad eta1") {
    GroundModel tiny = GroundModel::make(
        {{rat("1/4"), {0}}, {rat("1/4"), {1}}, {rat("1/4"), {2}}, {rat("1/4"), {3}}});
    PointSet a = tiny.all_points();
    std::vector<PointSet> parts{a};
    AllSubsetsFamily all;
    // four uniform blocks cannot host the tag demand for any eta1
    CHECK_THROWS_AS(filling_to_mc_pipeline(tiny, a, all, rat("1"), rat("1/10"), parts),
                    InputError);
    CHECK_THROWS_AS(filling_to_mc_pipeline(tiny, a, all, rat("1"), rat("2"), parts), InputError);
    CHECK_THROWS_AS(filling_to_mc_pipeline(tiny, a, all, rat("1"), rat("0"), parts), InputError);
}

TEST_CASE("pipeline rejects families that cannot fill the pool") {
    std::vector<Block> blocks(41);
    for (int b = 0; b < 41; ++b) blocks[b] = {rat("1/41"), {b}};
    GroundModel m = GroundModel::make(std::move(blocks));
    PointSet a = m.all_points();
    std::vector<PointSet> parts{a};
    SizeAtMostFamily one(1);  // nowhere near 1-filling on 40 tags
    CHECK_THROWS_WITH_AS(filling_to_mc_pipeline(m, a, one, rat("1"), rat("1/10"), parts),
                         doctest::Contains("not epsilon-filling"), InputError);
}

TEST_CASE("greedy selection on transversal systems") {
    // single class, coarsest partition
    GroundModel m = two_halves();
    TransversalSystem ts{{{0, 1}}};
    AllSubsetsFamily all(GroundKind::Naturals);
    std::vector<PointSet> coarse{{0, 1}};
    GreedyResult r = greedy_select(m, ts, all, coarse, rat("1/2"));
    CHECK(r.member.size() == 1);
    CHECK(r.value == 1);
    CHECK(r.n == 1);

    // four uniform blocks, two full transversals, two two-block parts
    std::vector<Block> blocks(4);
    for (int b = 0; b < 4; ++b) blocks[b] = {rat("1/4"), {2 * b, 2 * b + 1}};
    GroundModel quad = GroundModel::make(std::move(blocks));
    TransversalSystem two{{{0, 2, 4, 6}, {1, 3, 5, 7}}};
    std::vector<PointSet> pair_parts{{0, 1, 2, 3}, {4, 5, 6, 7}};
    GreedyResult picked = greedy_select(quad, two, all, pair_parts, rat("1/2"));
    CHECK(picked.n == 2);
    CHECK(picked.value > rat("1/2"));
    CHECK(picked.value == partition_value(quad, pair_parts, picked.member));
    CHECK(picked.member.size() == picked.class_sequence.size());
    // phi injective: one point per class
    std::vector<int> phi = picked.class_sequence;
    CHECK(normalized(phi).size() == phi.size());

    // a fiber missing a positive block is rejected
    TransversalSystem broken{{{0, 2, 4}, {1, 3, 5, 6, 7}}};
    CHECK_THROWS_WITH_AS(greedy_select(quad, broken, all, pair_parts, rat("1/2")),
                         doctest::Contains("full outer measure"), InputError);

    // no workable level set: singleton parts cap every fiber trace at 1/4
    std::vector<PointSet> fine;
    for (PointId p = 0; p < 8; ++p) fine.push_back({p});
    CHECK_THROWS_WITH_AS(greedy_select(quad, two, all, fine, rat("1/2")),
                         doctest::Contains("too small"), InputError);
}

TEST_CASE("greedy postconditions on seeded instances") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        int block_count = 3 + static_cast<int>(rng() % 4);
        int class_count = 2 + static_cast<int>(rng() % 2);
        std::vector<Block> blocks(block_count);
        std::vector<PointSet> fibers(class_count);
        int next_point = 0;
        for (int b = 0; b < block_count; ++b) {
            blocks[b].measure = Rational(1, block_count);
            for (int c = 0; c < class_count; ++c) {
                blocks[b].points.push_back(next_point);
                fibers[c].push_back(next_point);
                ++next_point;
            }
        }
        GroundModel m = GroundModel::make(std::move(blocks));
        // two parts splitting the blocks
        std::vector<PointSet> parts(2);
        for (PointId p = 0; p < m.point_count(); ++p)
            parts[m.block_of(p) < block_count / 2 ? 0 : 1].push_back(p);
        AllSubsetsFamily all(GroundKind::Naturals);
        Rational eps = rat("1/2");
        GreedyResult r = greedy_select(m, TransversalSystem{fibers}, all, parts, eps);
        CHECK(r.value > eps);
        CHECK(r.value == partition_value(m, parts, r.member));
        CHECK(normalized(r.class_sequence).size() == r.member.size());
    }
}
