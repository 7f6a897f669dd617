#include <doctest.h>

#include "test_support.hpp"

using namespace mlcake;
using mlcake::testing::Rng;
using mlcake::testing::golden_exact2x2;
using mlcake::testing::rat;
using mlcake::testing::uniform_instance;

namespace {

MultiAllocation layers_to_agents(const Instance& inst) {
    // agent i takes layer i wholesale (n == m)
    std::vector<LayeredPiece> pieces(inst.n(), LayeredPiece(inst.m()));
    for (std::size_t i = 0; i < inst.n(); ++i)
        pieces[i].per_layer[i] = normalize_piece({inst.cake.layers[i]});
    return MultiAllocation{inst.cake, pieces};
}

} // namespace

TEST_CASE("value matrix") {
    const Instance inst =
        uniform_instance(2, {{rat("1/2"), rat("1/2")}, {rat("1/2"), rat("1/2")}});
    const ValueMatrix m = value_matrix(inst, layers_to_agents(inst));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(m.entries[i][j] == rat("1/2"));

    for (int seed = 0; seed < 20; ++seed) {
        const Instance random = generate_instance(11000 + seed, 3, 3, 2);
        const ProtocolResult result = proportional_3x3(random);
        const ValueMatrix vm = value_matrix(random, result.allocation);
        for (std::size_t i = 0; i < 3; ++i) {
            Rational row = 0;
            for (std::size_t j = 0; j < 3; ++j) row += vm.entries[i][j];
            CHECK(row == 1);
        }
    }

    // sharer rows of the worked envy-free instance are constant thirds
    const Valuation shared = mlcake::testing::golden_ef3x2_shared();
    const Valuation chooser =
        mlcake::testing::uniform_valuation(full_cake(2), {rat("1/2"), rat("1/2")});
    const Instance ef{full_cake(2), {shared, shared, chooser}};
    const ValueMatrix em = value_matrix(ef, envy_free_3x2(ef).allocation);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(em.entries[i][j] == rat("1/3"));
}

TEST_CASE("fairness reports") {
    SUBCASE("exact division output is exact, envy-free and proportional") {
        const Instance inst = golden_exact2x2();
        const ProtocolResult result = exact_2x2(inst);
        const FairnessReport report = fairness_report(inst, result.allocation);
        CHECK(report.exact);
        CHECK(report.envy_free);
        CHECK(report.proportional);
        CHECK(report.equitable);
        CHECK(report.feasible);
        CHECK(report.complete);
    }
    SUBCASE("grabbing everything is not proportional, witnesses name the losers") {
        const Instance inst = uniform_instance(
            3, {{rat("1/3"), rat("1/3"), rat("1/3")}, {rat("1/3"), rat("1/3"), rat("1/3")},
                {rat("1/3"), rat("1/3"), rat("1/3")}});
        std::vector<LayeredPiece> pieces(3, LayeredPiece(3));
        for (std::size_t l = 0; l < 3; ++l)
            pieces[0].per_layer[l] = normalize_piece({inst.cake.layers[l]});
        const FairnessReport report = fairness_report(inst, {inst.cake, pieces});
        CHECK_FALSE(report.proportional);
        CHECK(report.proportional_witnesses == std::vector<std::size_t>{1, 2});
        CHECK(report.complete);
    }
    SUBCASE("uniform 3x3 protocol output is exact") {
        std::vector<std::vector<Rational>> masses(3, {rat("1/3"), rat("1/3"), rat("1/3")});
        const Instance inst = uniform_instance(3, masses);
        const ProtocolResult result = proportional_3x3(inst);
        const FairnessReport report = fairness_report(inst, result.allocation);
        CHECK(report.proportional);
        CHECK(report.exact);
    }
}

TEST_CASE("fairness implications on protocol outputs") {
    for (int seed = 0; seed < 30; ++seed) {
        const Instance inst = generate_instance(12000 + seed, 3, 3, 2);
        const ProtocolResult result = proportional_3x3(inst);
        const FairnessReport report = fairness_report(inst, result.allocation);
        REQUIRE(report.complete);
        if (report.exact) {
            CHECK(report.equitable);
            CHECK(report.proportional);
        }
        if (report.envy_free) CHECK(report.proportional);
    }
}

TEST_CASE("riemann oracle agrees with the query layer") {
    SUBCASE("named examples") {
        const Instance inst = uniform_instance(2, {{rat("3/4"), rat("1/4")}});
        LayeredPiece whole(2);
        for (std::size_t l = 0; l < 2; ++l) whole.per_layer[l] = normalize_piece({{0, 1}});
        CHECK(riemann_oracle(inst, 0, whole, 1) == 1);
        CHECK(riemann_oracle(inst, 0, whole, 7) == 1);

        LayeredPiece mixed(2);
        mixed.per_layer[0] = normalize_piece({{0, rat("1/3")}});
        mixed.per_layer[1] = normalize_piece({{rat("2/3"), 1}});
        CHECK(riemann_oracle(inst, 0, mixed, 1) == rat("1/3"));
        CHECK(riemann_oracle(inst, 0, mixed, 5) == value_of(inst.agents[0], mixed));
    }
    SUBCASE("random pieces and instances") {
        Rng rng(31);
        for (int round = 0; round < 200; ++round) {
            const std::size_t m = 1 + rng.below(4);
            const Instance inst = generate_instance(13000 + round, 2, m, 1 + rng.below(5));
            LayeredPiece piece(m);
            for (std::size_t l = 0; l < m; ++l)
                piece.per_layer[l] =
                    normalize_piece(mlcake::testing::random_intervals(rng, rng.below(3)));
            const std::size_t agent = rng.below(2);
            const int resolution = 1 + static_cast<int>(rng.below(4));
            CHECK(riemann_oracle(inst, agent, piece, resolution) ==
                  value_of(inst.agents[agent], piece));
        }
    }
}

TEST_CASE("exhaustive two-knife search") {
    SUBCASE("uniform agents achieve zero deficiency at the origin") {
        const Instance inst =
            uniform_instance(2, {{rat("1/2"), rat("1/2")}, {rat("1/2"), rat("1/2")}});
        const TwoKnifeSearch best = exhaustive_2x2_oracle(inst, 8);
        CHECK(best.deficiency == 0);
        CHECK(best.x == 0);
        CHECK(best.y == 0);
    }
    SUBCASE("deficiency shrinks under refinement and is bounded by density/grid") {
        // move the golden instance's root off any small grid
        Instance inst = golden_exact2x2();
        const ProtocolResult result = exact_2x2(inst);
        (void)result;
        Rational prev = -1;
        for (const int grid : {8, 16, 32, 64}) {
            const TwoKnifeSearch best = exhaustive_2x2_oracle(inst, grid);
            if (prev >= Rational(0)) CHECK(best.deficiency <= prev);
            prev = best.deficiency;
        }
    }
    SUBCASE("grid bound is enforced") {
        CHECK_THROWS_AS(exhaustive_2x2_oracle(golden_exact2x2(), 65), validation_error);
    }
}
