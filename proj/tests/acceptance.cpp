// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every assertion is an exact rational comparison.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "test_support.hpp"

using namespace mlcake;
using mlcake::testing::Rng;
using mlcake::testing::golden_exact2x2;
using mlcake::testing::golden_ef3x2_shared;
using mlcake::testing::rat;
using mlcake::testing::uniform_instance;
using mlcake::testing::uniform_valuation;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void expect_structure(const Instance& inst, const ProtocolResult& result, bool contiguous,
                      const std::string& label) {
    require(is_exact_partition(result.allocation), label + ": allocation does not tile the cake");
    for (std::size_t i = 0; i < inst.n(); ++i) {
        require(is_non_overlapping(result.allocation.pieces[i]), label + ": piece overlaps");
        if (contiguous)
            require(is_contiguous(result.allocation.pieces[i]), label + ": piece not contiguous");
    }
}

// 1. Exact division for two agents on two layers
void criterion_exactness() {
    const auto start = std::chrono::steady_clock::now();
    for (int seed = 0; seed < 200; ++seed) {
        const Instance inst = generate_instance(100000 + seed, 2, 2, 1 + seed % 6);
        const ProtocolResult result = exact_2x2(inst);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                require(value_of(inst.agents[i], result.allocation.pieces[j]) == rat("1/2"),
                        "value matrix entry differs from 1/2 at seed " + std::to_string(seed));
        expect_structure(inst, result, false, "exact2x2 seed " + std::to_string(seed));
    }
    const Instance golden = golden_exact2x2();
    const ProtocolResult result = exact_2x2(golden);
    const TwoKnifePieces knives = two_knife_cut(golden.cake, rat("1/4"), rat("3/4"));
    require(result.allocation.pieces[0] == knives.tlr && result.allocation.pieces[1] == knives.trl,
            "golden instance does not cut at (1/4, 3/4)");
    const double elapsed = seconds_since(start);
    require(elapsed < 1.0, "exactness suite took " + std::to_string(elapsed) + "s (limit 1s)");
}

// 2. Envy-free division for three agents on two layers
void criterion_envy_free() {
    for (int seed = 0; seed < 200; ++seed) {
        const Valuation shared = generate_instance(110000 + seed, 1, 2, 1 + seed % 5).agents[0];
        const Valuation chooser = generate_instance(120000 + seed, 1, 2, 1 + (seed + 2) % 5).agents[0];
        const ProtocolResult result = envy_free_3x2(full_cake(2), shared, chooser);
        const Instance inst{full_cake(2), {shared, shared, chooser}};
        for (std::size_t j = 0; j < 3; ++j)
            require(value_of(shared, result.allocation.pieces[j]) == rat("1/3"),
                    "sharer value differs from 1/3 at seed " + std::to_string(seed));
        const FairnessReport report = fairness_report(inst, result.allocation);
        require(report.envy_free, "envy at seed " + std::to_string(seed));
        expect_structure(inst, result, true, "ef3x2 seed " + std::to_string(seed));
    }
    const Valuation shared = golden_ef3x2_shared();
    const ProtocolResult result =
        envy_free_3x2(full_cake(2), shared, uniform_valuation(full_cake(2), {rat("1/2"), rat("1/2")}));
    const auto& p1 = result.allocation.pieces[0];
    const auto& p3 = result.allocation.pieces[2];
    require(p1.per_layer[0] == normalize_piece({{0, rat("1/3")}}) &&
                p1.per_layer[1] == normalize_piece({{rat("2/3"), 1}}),
            "golden sharer piece is not (L1[0,1/3], L2[2/3,1])");
    require(p3.per_layer[0] == normalize_piece({{rat("7/9"), 1}}),
            "golden construction does not cut the remainder at 7/9");
}

// 3. Proportional division of three layers for three to six agents
void criterion_proportional_3layers() {
    const auto start = std::chrono::steady_clock::now();
    for (const std::size_t n : {3u, 4u, 5u, 6u}) {
        for (int seed = 0; seed < 200; ++seed) {
            const Instance inst =
                generate_instance(130000 + 1000 * n + seed, n, 3, 1 + seed % 4);
            const ProtocolResult result = proportional_3layer_n(inst);
            const Rational share(1, static_cast<long>(n));
            for (std::size_t i = 0; i < n; ++i)
                require(value_of(inst.agents[i], result.allocation.pieces[i]) >= share,
                        "share below 1/n for n=" + std::to_string(n) + " seed " +
                            std::to_string(seed));
            expect_structure(inst, result, true,
                             "prop3n n=" + std::to_string(n) + " seed " + std::to_string(seed));
        }
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 5.0, "proportional suite took " + std::to_string(elapsed) + "s (limit 5s)");
}

// 4. Recursive dispatcher over supported layer counts
void criterion_dispatcher() {
    for (const std::size_t m : {1u, 2u, 3u, 4u, 6u, 8u, 12u}) {
        for (std::size_t n = m; n <= m + 3; ++n) {
            for (int seed = 0; seed < 20; ++seed) {
                const Instance inst =
                    generate_instance(140000 + 997 * m + 101 * n + seed, n, m, 2);
                // lift checks run inside the recursion; any violation throws
                const ProtocolResult result = proportional_recursive(inst);
                const Rational share(1, static_cast<long>(n));
                for (std::size_t i = 0; i < n; ++i)
                    require(value_of(inst.agents[i], result.allocation.pieces[i]) >= share,
                            "share below 1/n for m=" + std::to_string(m) +
                                " n=" + std::to_string(n) + " seed " + std::to_string(seed));
                expect_structure(inst, result, true,
                                 "prop m=" + std::to_string(m) + " n=" + std::to_string(n));
            }
        }
    }
    for (const std::size_t m : {5u, 9u, 25u}) {
        bool rejected = false;
        try {
            proportional_recursive(generate_instance(150000 + m, m, m, 1));
        } catch (const unsupported_shape_error&) {
            rejected = true;
        }
        require(rejected, "m=" + std::to_string(m) + " was not rejected as unsupported");
    }
}

// 5. Switching points and majority splits
void criterion_switching() {
    int checked = 0;
    for (int seed = 0; checked < 500; ++seed) {
        const std::size_t m = 2 + seed % 3;
        const Instance inst = generate_instance(160000 + seed, 1, m, 1 + seed % 5);
        const Rational x = switching_point(inst.agents[0], inst.cake);
        const DiagonalCut cut = diagonal_cut(inst.cake, x);
        require(value_of(inst.agents[0], cut.lr) == value_of(inst.agents[0], cut.rl),
                "switching point is not exact at seed " + std::to_string(seed));
        const PreferenceMargin margin = preference_margin(0, inst.agents[0], inst.cake);
        require(margin.d.eval(0) == -margin.d.eval(1),
                "margin endpoint anti-symmetry fails at seed " + std::to_string(seed));
        ++checked;
    }
    for (std::size_t n = 2; n <= 12; n += 2) {
        for (int seed = 0; seed < 12; ++seed) {
            const std::size_t m = 2 + seed % 3; // 2, 3 (merged view), 4
            const Instance inst = generate_instance(170000 + 31 * n + seed, n, m, 2);
            const MajoritySplit split = majority_switching_point(inst.agents, inst.cake);
            require(split.group_lr.size() == n / 2 && split.group_rl.size() == n / 2,
                    "majority split is unbalanced");
            const DiagonalCut cut = diagonal_cut(inst.cake, split.x);
            for (const auto i : split.group_lr)
                require(value_of(inst.agents[i], cut.lr) >= value_of(inst.agents[i], cut.rl),
                        "LR group member prefers RL");
            for (const auto i : split.group_rl)
                require(value_of(inst.agents[i], cut.rl) >= value_of(inst.agents[i], cut.lr),
                        "RL group member prefers LR");
        }
    }
}

// 6. Lemma 1 lift property
void criterion_lift() {
    Rng rng(61);
    int checked = 0;
    for (int round = 0; checked < 500; ++round) {
        const std::size_t m = 2 + rng.below(5); // 2..6
        const Instance inst = generate_instance(180000 + round, 1, m, 2);
        const Rational x = rng.fraction(16);
        const MergedCake merged = m % 2 == 0
                                      ? merge_even(inst.cake, x, rng.below(2) ? Side::LR : Side::RL)
                                      : merge_odd(inst.cake, x, rng.below(2) ? Side::LR : Side::RL);
        LayeredPiece virt(merged.m());
        if (rng.below(2)) {
            // staircase piece with ascending windows: contiguous,
            // non-overlapping, and crossing the seams
            std::vector<Rational> steps;
            for (std::size_t vl = 0; vl <= merged.m(); ++vl) steps.push_back(rng.fraction(16));
            std::sort(steps.begin(), steps.end());
            for (std::size_t vl = 0; vl < merged.m(); ++vl)
                virt.per_layer[vl] = intersect(normalize_piece({merged.cake.layers[vl]}),
                                               Interval(steps[vl], steps[vl + 1]));
        } else {
            // one random window on one virtual layer
            const std::size_t vl = rng.below(merged.m());
            Rational a = rng.fraction(16), b = rng.fraction(16);
            if (b < a) std::swap(a, b);
            virt.per_layer[vl] =
                intersect(normalize_piece({merged.cake.layers[vl]}), Interval(a, b));
        }
        if (!is_non_overlapping(virt) || !is_contiguous(virt)) continue;
        const LayeredPiece lifted = lift_piece(merged, virt, m);
        require(is_contiguous(lifted), "lift broke contiguity at round " + std::to_string(round));
        require(is_non_overlapping(lifted),
                "lift broke non-overlap at round " + std::to_string(round));
        require(value_of(transport(inst.agents[0], merged), virt) ==
                    value_of(inst.agents[0], lifted),
                "value transport is not exact at round " + std::to_string(round));
        ++checked;
    }
}

// 7. Oracle independence
void criterion_oracles() {
    Rng rng(71);
    int checked = 0;
    for (int round = 0; checked < 1000; ++round) {
        const std::size_t m = 1 + rng.below(4);
        const std::size_t n = 1 + rng.below(2);
        const Instance inst = generate_instance(190000 + round, n, m, 1 + rng.below(5));
        LayeredPiece piece(m);
        for (std::size_t l = 0; l < m; ++l)
            piece.per_layer[l] = normalize_piece(mlcake::testing::random_intervals(rng, rng.below(3)));
        const std::size_t agent = rng.below(n);
        require(riemann_oracle(inst, agent, piece, 1 + static_cast<int>(rng.below(5))) ==
                    value_of(inst.agents[agent], piece),
                "riemann oracle disagrees at round " + std::to_string(round));
        ++checked;
    }

    int off_grid = 0;
    for (int seed = 0; off_grid < 20; ++seed) {
        const Instance inst = generate_instance(200000 + seed, 2, 2, 2 + seed % 4);
        const ProtocolResult result = exact_2x2(inst);
        // recover the knife pair from the bottom-layer piece of agent 1;
        // an empty bottom piece means TLR is the whole top layer, which the
        // pair (0,0) reproduces exactly
        Rational x(0), y(0);
        if (!result.allocation.pieces[0].per_layer[1].empty()) {
            x = result.allocation.pieces[0].per_layer[1].intervals[0].lo;
            y = result.allocation.pieces[0].per_layer[1].intervals[0].hi;
        }
        const auto aligned = [](const Rational& v) {
            return mpz_divisible_p(mpz_class(32).get_mpz_t(), v.den().get_mpz_t()) != 0;
        };
        if (aligned(x) && aligned(y)) {
            const TwoKnifeSearch search = exhaustive_2x2_oracle(inst, 32);
            require(search.deficiency == 0,
                    "grid-aligned root but positive deficiency at seed " + std::to_string(seed));
            continue;
        }
        // off-grid: deficiency must shrink under refinement, bounded by
        // (total density sup) / grid
        Rational sup = 0;
        for (const auto& agent_v : inst.agents)
            for (const auto& d : agent_v.densities)
                for (const auto& w : d.values()) sup = max(sup, w);
        const Rational cap = sup * 4; // 2 agents x 2 layers
        Rational prev = -1;
        for (const int grid : {8, 16, 32, 64}) {
            const TwoKnifeSearch search = exhaustive_2x2_oracle(inst, grid);
            if (prev >= Rational(0))
                require(search.deficiency <= prev, "deficiency grew under refinement");
            prev = search.deficiency;
            if (grid == 64)
                require(search.deficiency <= cap / 64,
                        "deficiency not within the Lipschitz bound at seed " +
                            std::to_string(seed));
        }
        ++off_grid;
    }
}

// 8. Determinism on the golden instances
void criterion_determinism() {
    std::vector<std::pair<std::string, Instance>> goldens;
    goldens.emplace_back("exact2x2", golden_exact2x2());
    goldens.emplace_back("ef3x2", Instance{full_cake(2),
                                           {golden_ef3x2_shared(), golden_ef3x2_shared(),
                                            uniform_valuation(full_cake(2), {rat("1/2"), rat("1/2")})}});
    std::vector<std::vector<Rational>> third(3, {rat("1/3"), rat("1/3"), rat("1/3")});
    goldens.emplace_back("prop3x3", uniform_instance(3, third));
    std::vector<std::vector<Rational>> quarters(4, {rat("1/3"), rat("1/3"), rat("1/3")});
    goldens.emplace_back("prop3n", uniform_instance(3, quarters));
    std::vector<std::vector<Rational>> fifths(5, {rat("1/3"), rat("1/3"), rat("1/3")});
    goldens.emplace_back("prop3n", uniform_instance(3, fifths));
    goldens.emplace_back("prop", generate_instance(1, 6, 6, 3));
    goldens.emplace_back("cutchoose2", uniform_instance(2, {{1, 0}, {0, 1}}));
    for (const auto& [protocol, inst] : goldens) {
        const std::string once = save_allocation(inst, run_protocol(protocol, inst), protocol);
        const std::string twice = save_allocation(inst, run_protocol(protocol, inst), protocol);
        require(once == twice, "non-deterministic output for " + protocol);
    }
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"exactness n=2 m=2", criterion_exactness},
        {"envy-freeness n=3 m=2", criterion_envy_free},
        {"proportionality m=3, n=3..6", criterion_proportional_3layers},
        {"recursive dispatcher shapes", criterion_dispatcher},
        {"switching and majority points", criterion_switching},
        {"merge lift", criterion_lift},
        {"oracle independence", criterion_oracles},
        {"determinism", criterion_determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k].second();
            std::cout << "criterion " << k + 1 << " (" << criteria[k].first << "): PASS\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "criterion " << k + 1 << " (" << criteria[k].first
                      << "): FAIL - " << e.what() << "\n";
        }
    }
    return failures == 0 ? 0 : 1;
}
