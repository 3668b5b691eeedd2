#include "doctest.h"

#include <random>

#include "mcfill/dyadic.hpp"
#include "mcfill/errors.hpp"
#include "mcfill/family.hpp"

using namespace mcfill;

namespace {

Rational rat(const char* s) { return parse_rational(s); }

std::vector<std::vector<int>> subsets_of(const std::vector<int>& base) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << base.size()); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (mask & (1u << i)) s.push_back(base[i]);
        out.push_back(s);
    }
    return out;
}

// plain enumeration of all subsets of H, the oracle for the member search
Rational enumeration_max(const HereditaryFamily& family, const std::vector<int>& h,
                         const std::vector<Rational>& w) {
    Rational best = family.contains({}) ? Rational(0) : Rational(-1);
    for (unsigned mask = 1; mask < (1u << h.size()); ++mask) {
        std::vector<int> f;
        Rational weight = 0;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (mask & (1u << i)) {
                f.push_back(h[i]);
                weight += w[i];
            }
        if (family.contains(f) && weight > best) best = weight;
    }
    return best;
}

}  // namespace

TEST_CASE("explicit families close downward") {
    ExplicitFamily empty(std::vector<std::vector<int>>{});
    CHECK_FALSE(empty.contains({}));

    ExplicitFamily trivial(std::vector<std::vector<int>>{{}});
    CHECK(trivial.contains({}));
    CHECK_FALSE(trivial.contains({0}));

    ExplicitFamily pair({{1, 2}}, GroundKind::Naturals);
    CHECK(pair.contains({}));
    CHECK(pair.contains({1}));
    CHECK(pair.contains({2}));
    CHECK(pair.contains({1, 2}));
    CHECK_FALSE(pair.contains({1, 3}));

    // every subset of every generator is a member, generators up to size 4
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<int>> generators;
        int count = 1 + static_cast<int>(rng() % 3);
        for (int g = 0; g < count; ++g) {
            std::vector<int> gen;
            for (int e = 0; e < 8; ++e)
                if (rng() % 3 == 0 && gen.size() < 4) gen.push_back(e);
            generators.push_back(gen);
        }
        ExplicitFamily family(generators);
        for (const auto& gen : generators)
            for (const auto& sub : subsets_of(normalized(gen))) CHECK(family.contains(sub));
    }
}

TEST_CASE("explicit family heredity, exhaustively at small size") {
    ExplicitFamily family(std::vector<std::vector<int>>{{0, 1, 2}, {2, 3}, {4}});
    std::vector<int> universe{0, 1, 2, 3, 4};
    for (const auto& f : subsets_of(universe)) {
        if (!family.contains(f)) continue;
        for (const auto& g : subsets_of(f)) CHECK(family.contains(g));
    }
}

TEST_CASE("rule families honor their ground kinds and heredity") {
    SchreierFamily schreier;
    CHECK(schreier.contains({}));
    CHECK(schreier.contains({2, 5}));
    CHECK_FALSE(schreier.contains({1, 2}));
    CHECK_THROWS_AS(schreier.contains({0, 2}), InputError);

    PartitionFamily partition({{0, 1}, {2}});
    CHECK(partition.contains({0, 1}));
    CHECK_FALSE(partition.contains({1, 2}));
    CHECK(partition.contains({}));
    CHECK_FALSE(partition.contains({0, 5}));  // 5 is in no class

    std::mt19937 rng(5);
    DyadicDFamily dyadic(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> leaves;
        for (int code = 16; code < 32 && leaves.size() < 6; ++code)
            if (rng() % 3 == 0) leaves.push_back(code);
        if (!dyadic.contains(leaves)) continue;
        for (const auto& sub : subsets_of(leaves)) CHECK(dyadic.contains(sub));
    }
}

TEST_CASE("compactness witness checks reduce to membership") {
    SchreierFamily schreier;
    CHECK(is_compact_counterexample(schreier, std::vector<int>{}));
    CHECK(is_compact_counterexample(schreier, std::vector<int>{2, 3}));
    CHECK_FALSE(is_compact_counterexample(schreier, std::vector<int>{1, 2, 3}));
}

TEST_CASE("max_member_weight agrees with plain enumeration") {
    SchreierFamily schreier;
    std::vector<int> h;
    std::vector<Rational> unit;

    auto empty_best = max_member_weight(schreier, h, unit);
    REQUIRE(empty_best);
    CHECK(empty_best->value == 0);
    CHECK(empty_best->member.empty());

    AllSubsetsFamily all;
    h = {0, 1, 2, 3, 4};
    unit.assign(5, Rational(1));
    auto full = max_member_weight(all, h, unit);
    REQUIRE(full);
    CHECK(full->value == 5);
    CHECK(full->member == h);

    h = {1, 2, 3, 4, 5, 6};
    unit.assign(6, Rational(1));
    auto schreier_best = max_member_weight(schreier, h, unit);
    REQUIRE(schreier_best);
    CHECK(schreier_best->value == enumeration_max(schreier, h, unit));
    CHECK(schreier_best->value == 3);
    CHECK(schreier.contains(schreier_best->member));

    // random weights and random explicit families, against the oracle
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<int>> generators;
        for (int g = 0; g < 3; ++g) {
            std::vector<int> gen;
            for (int e = 1; e <= 9; ++e)
                if (rng() % 3 == 0) gen.push_back(e);
            generators.push_back(gen);
        }
        ExplicitFamily family(generators, GroundKind::Naturals);
        std::vector<int> ground;
        for (int e = 1; e <= 9; ++e)
            if (rng() % 2 == 0) ground.push_back(e);
        std::vector<Rational> weights;
        for (std::size_t i = 0; i < ground.size(); ++i)
            weights.push_back(Rational(static_cast<int>(rng() % 5), 3));
        auto best = max_member_weight(family, ground, weights);
        REQUIRE(best);
        CHECK(best->value == enumeration_max(family, ground, weights));
        CHECK(family.contains(best->member));
    }

    ExplicitFamily none(std::vector<std::vector<int>>{});
    CHECK_FALSE(max_member_weight(none, h, unit).has_value());
    std::vector<Rational> bad{Rational(-1)};
    CHECK_THROWS_AS(max_member_weight(all, std::vector<int>{1}, bad), InputError);
}

TEST_CASE("shifted naturals families reground rule families on point ids") {
    ShiftedNaturalsFamily shifted(std::make_unique<SchreierFamily>());
    CHECK(shifted.contains({}));
    CHECK(shifted.contains({1, 4}));        // plays {2, 5}
    CHECK_FALSE(shifted.contains({0, 1}));  // plays {1, 2}
    auto cursor = shifted.make_cursor();
    CHECK(cursor->try_push(0));   // {1}
    CHECK_FALSE(cursor->try_push(3));
    cursor->pop();
    CHECK(cursor->try_push(2));   // {3}
    CHECK(cursor->try_push(4));
    CHECK(cursor->try_push(6));
    CHECK_FALSE(cursor->try_push(7));
    CHECK_THROWS_AS(ShiftedNaturalsFamily(std::make_unique<AllSubsetsFamily>()), InputError);
}

TEST_CASE("member search oracle equivalence up to |H| = 12") {
    SchreierFamily schreier;
    std::vector<int> twelve;
    for (int i = 1; i <= 12; ++i) twelve.push_back(i);
    std::vector<Rational> unit(12, Rational(1));
    auto best = max_member_weight(schreier, twelve, unit);
    REQUIRE(best);
    CHECK(best->value == enumeration_max(schreier, twelve, unit));
    CHECK(best->value == 6);  // the top half {7..12}

    std::mt19937 rng(31);
    std::vector<Rational> weights;
    for (int i = 0; i < 12; ++i) weights.push_back(Rational(static_cast<int>(rng() % 7), 4));
    auto weighted = max_member_weight(schreier, twelve, weights);
    REQUIRE(weighted);
    CHECK(weighted->value == enumeration_max(schreier, twelve, weights));
}

TEST_CASE("member search respects its node budget") {
    AllSubsetsFamily all;
    std::vector<int> h;
    for (int i = 0; i < 20; ++i) h.push_back(i);
    std::vector<Rational> w(20, Rational(1));
    SearchLimits tiny;
    tiny.max_nodes = 50;
    CHECK_THROWS_AS(max_member_weight(all, h, w, tiny), ResourceError);
}

TEST_CASE("find_member_of_size digs out a witness quickly") {
    SchreierFamily schreier;
    std::vector<int> h;
    for (int i = 1; i <= 60; ++i) h.push_back(i);
    auto member = find_member_of_size(schreier, h, 30);
    REQUIRE(member);
    CHECK(member->size() == 30);
    CHECK(schreier.contains(*member));
    CHECK_FALSE(find_member_of_size(schreier, std::vector<int>{1, 2, 3}, 3).has_value());
}

TEST_CASE("filling verdicts carry replayable certificates") {
    AllSubsetsFamily all;
    std::vector<int> s{1, 2, 3, 4};
    FillingOptions options;
    options.max_h = 4;
    CHECK(is_filling(all, s, rat("1"), options).holds);

    SizeAtMostFamily one(1, GroundKind::Naturals);
    Verdict quarter = is_filling(one, s, rat("1/4"), options);
    CHECK(quarter.holds);
    CHECK(quarter.value == rat("1/4"));  // the worst H is the whole set

    Verdict third = is_filling(one, s, rat("1/3"), options);
    CHECK_FALSE(third.holds);
    CHECK(third.certificate.witness == s);  // only H = S violates
    CHECK(third.value == rat("1/4"));

    // restricted-sweep verdicts are antitone in epsilon
    SchreierFamily schreier;
    std::vector<int> twelve;
    for (int i = 1; i <= 12; ++i) twelve.push_back(i);
    FillingOptions wide;
    wide.max_h = 12;
    Verdict half = is_filling(schreier, twelve, rat("1/2"), wide);
    CHECK(half.holds);
    CHECK(is_filling(schreier, twelve, rat("1/4"), wide).holds);
    CHECK_FALSE(is_filling(schreier, twelve, rat("2/3"), wide).holds);

    // a true verdict at max_h stays true at every smaller sweep bound
    for (int bound = 1; bound <= 12; ++bound) {
        FillingOptions partial;
        partial.max_h = bound;
        CHECK(is_filling(schreier, twelve, rat("1/2"), partial).holds);
    }

    CHECK_THROWS_AS(is_filling(all, s, rat("0"), options), InputError);
    CHECK_THROWS_AS(is_filling(all, s, rat("3/2"), options), InputError);
}
