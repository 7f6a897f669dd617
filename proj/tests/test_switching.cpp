#include <doctest.h>

#include "test_support.hpp"

using namespace mlcake;
using mlcake::testing::Rng;
using mlcake::testing::rat;
using mlcake::testing::uniform_instance;
using mlcake::testing::uniform_valuation;

TEST_CASE("individual switching points") {
    const LayeredCake cake = full_cake(2);
    // flat cut-value function: whole [0,1] solves, midpoint rule gives 1/2
    CHECK(switching_point(uniform_valuation(cake, {rat("1/2"), rat("1/2")}), cake) == rat("1/2"));
    // s(x) = 1/4 + x/2
    CHECK(switching_point(uniform_valuation(cake, {rat("3/4"), rat("1/4")}), cake) == rat("1/2"));
    // all value on the top layer: s(x) = x
    CHECK(switching_point(uniform_valuation(cake, {1, 0}), cake) == rat("1/2"));
}

TEST_CASE("switching point halves the cake exactly") {
    Rng rng(21);
    for (int round = 0; round < 100; ++round) {
        const std::size_t m = 2 + rng.below(3);
        const Instance inst = generate_instance(5000 + round, 1, m, 1 + rng.below(5));
        const Rational x = switching_point(inst.agents[0], inst.cake);
        const DiagonalCut cut = diagonal_cut(inst.cake, x);
        CHECK(value_of(inst.agents[0], cut.lr) == value_of(inst.agents[0], cut.rl));
        CHECK(value_of(inst.agents[0], cut.lr) == rat("1/2"));
    }
}

TEST_CASE("switching point ignores positive rescaling of the density") {
    Rng rng(22);
    for (int round = 0; round < 40; ++round) {
        const Instance inst = generate_instance(6000 + round, 1, 2, 3);
        Valuation scaled;
        for (const auto& d : inst.agents[0].densities) {
            std::vector<Rational> tripled;
            for (const auto& w : d.values()) tripled.push_back(w * 3);
            scaled.densities.push_back(StepDensity(d.breakpoints(), std::move(tripled)));
        }
        CHECK(switching_point(scaled, inst.cake) == switching_point(inst.agents[0], inst.cake));
    }
}

TEST_CASE("margins are anti-symmetric at the endpoints") {
    Rng rng(23);
    for (int round = 0; round < 100; ++round) {
        const std::size_t m = 2 + rng.below(3);
        const Instance inst = generate_instance(7000 + round, 1, m, 2);
        const PreferenceMargin margin = preference_margin(0, inst.agents[0], inst.cake);
        CHECK(margin.d.eval(0) == -margin.d.eval(1));
    }
}

TEST_CASE("majority switching point on opposed agents") {
    // d_1 = 2x - 1 and d_2 = 1 - 2x share the zero x = 1/2, which is scanned
    // before the domain endpoints; the tie puts agent 1 on the LR side.
    const Instance inst = uniform_instance(2, {{1, 0}, {0, 1}});
    const MajoritySplit split = majority_switching_point(inst.agents, inst.cake);
    CHECK(split.x == rat("1/2"));
    CHECK(split.group_lr == std::vector<std::size_t>{0});
    CHECK(split.group_rl == std::vector<std::size_t>{1});
}

TEST_CASE("identical uniform agents tie everywhere, first candidate wins") {
    const Instance inst =
        uniform_instance(2, {{rat("1/2"), rat("1/2")}, {rat("1/2"), rat("1/2")}});
    const MajoritySplit split = majority_switching_point(inst.agents, inst.cake);
    CHECK(split.x == 0);
    CHECK(split.group_lr == std::vector<std::size_t>{0});
    CHECK(split.group_rl == std::vector<std::size_t>{1});
}

TEST_CASE("four uniform agents on three layers split at 1/2") {
    // merged top view: s(x) = 1/3 + x/3, so every margin vanishes at 1/2
    std::vector<std::vector<Rational>> masses(4, {rat("1/3"), rat("1/3"), rat("1/3")});
    const Instance inst = uniform_instance(3, masses);
    const MajoritySplit split = majority_switching_point(inst.agents, inst.cake);
    CHECK(split.x == rat("1/2"));
    CHECK(split.group_lr == std::vector<std::size_t>{0, 1});
    CHECK(split.group_rl == std::vector<std::size_t>{2, 3});
}

TEST_CASE("majority splits balance with weak preference on both sides") {
    Rng rng(24);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 2 * (1 + rng.below(3));
        const std::size_t m = 2 + rng.below(2) * 2; // 2 or 4
        const Instance inst = generate_instance(8000 + round, n, m, 2);
        const MajoritySplit split = majority_switching_point(inst.agents, inst.cake);
        REQUIRE(split.group_lr.size() == n / 2);
        REQUIRE(split.group_rl.size() == n / 2);
        const DiagonalCut cut = diagonal_cut(inst.cake, split.x);
        for (const auto i : split.group_lr)
            CHECK(value_of(inst.agents[i], cut.lr) >= value_of(inst.agents[i], cut.rl));
        for (const auto i : split.group_rl)
            CHECK(value_of(inst.agents[i], cut.rl) >= value_of(inst.agents[i], cut.lr));
    }
}

TEST_CASE("majority needs an even number of agents") {
    const Instance inst = generate_instance(1, 3, 2, 2);
    CHECK_THROWS_AS(majority_switching_point(inst.agents, inst.cake), validation_error);
}
