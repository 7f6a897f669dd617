#include <doctest.h>

#include <algorithm>

#include "test_support.hpp"

using namespace mlcake;
using mlcake::testing::Rng;
using mlcake::testing::random_intervals;
using mlcake::testing::rat;

TEST_CASE("normalize_piece merges, sorts and drops zero-length intervals") {
    const Piece merged = normalize_piece({{0, rat("1/2")}, {rat("1/2"), 1}});
    CHECK(merged.intervals == std::vector<Interval>{{0, 1}});

    CHECK(normalize_piece({{rat("1/4"), rat("1/4")}}).empty());

    const Piece sorted = normalize_piece({{rat("1/2"), rat("3/4")}, {0, rat("1/4")}});
    CHECK(sorted.intervals == std::vector<Interval>{{0, rat("1/4")}, {rat("1/2"), rat("3/4")}});

    CHECK_THROWS_AS(Interval(rat("1/2"), rat("1/4")), validation_error);
}

TEST_CASE("normalize_piece is idempotent and measure-preserving") {
    Rng rng(41);
    for (int round = 0; round < 200; ++round) {
        const auto raw = random_intervals(rng, 1 + rng.below(6));
        Rational raw_measure = 0;
        // raw intervals may overlap; compare against the union measure
        // computed by sweeping, which is what normalization must preserve
        std::vector<Interval> sorted = raw;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        bool first = true;
        Rational hi = 0;
        for (const auto& iv : sorted) {
            if (first || iv.lo > hi) {
                raw_measure += iv.length();
                hi = iv.hi;
                first = false;
            } else if (iv.hi > hi) {
                raw_measure += iv.hi - hi;
                hi = iv.hi;
            }
        }
        const Piece once = normalize_piece(raw);
        CHECK(once.measure() == raw_measure);
        CHECK(normalize_piece(once.intervals) == once);
        for (std::size_t k = 1; k < once.intervals.size(); ++k)
            CHECK(once.intervals[k - 1].hi < once.intervals[k].lo);
    }
}

TEST_CASE("is_contiguous") {
    LayeredPiece empty(2);
    CHECK(is_contiguous(empty));

    LayeredPiece two(2);
    two.per_layer[0] = normalize_piece({{0, rat("1/3")}});
    two.per_layer[1] = normalize_piece({{rat("1/2"), 1}});
    CHECK(is_contiguous(two));

    LayeredPiece split(2);
    split.per_layer[0] = normalize_piece({{0, rat("1/4")}, {rat("1/2"), rat("3/4")}});
    CHECK_FALSE(is_contiguous(split));
}

TEST_CASE("is_non_overlapping allows shared endpoints only") {
    LayeredPiece touching(2);
    touching.per_layer[0] = normalize_piece({{0, rat("1/2")}});
    touching.per_layer[1] = normalize_piece({{rat("1/2"), 1}});
    CHECK(is_non_overlapping(touching));

    LayeredPiece overlapping(2);
    overlapping.per_layer[0] = normalize_piece({{0, rat("3/4")}});
    overlapping.per_layer[1] = normalize_piece({{rat("1/2"), 1}});
    CHECK_FALSE(is_non_overlapping(overlapping));

    LayeredPiece single(3);
    single.per_layer[0] = normalize_piece({{0, 1}});
    CHECK(is_non_overlapping(single));
}

TEST_CASE("is_non_overlapping is invariant under layer permutation") {
    Rng rng(42);
    for (int round = 0; round < 100; ++round) {
        LayeredPiece piece(3);
        for (auto& layer : piece.per_layer)
            layer = normalize_piece(random_intervals(rng, rng.below(3)));
        LayeredPiece rotated(3);
        rotated.per_layer = {piece.per_layer[2], piece.per_layer[0], piece.per_layer[1]};
        CHECK(is_non_overlapping(piece) == is_non_overlapping(rotated));
    }
}

TEST_CASE("is_complete") {
    const LayeredCake cake = full_cake(2);
    LayeredPiece top(2), bottom(2);
    top.per_layer[0] = normalize_piece({{0, 1}});
    bottom.per_layer[1] = normalize_piece({{0, 1}});
    CHECK(is_complete({cake, {top, bottom}}));

    LayeredPiece half_bottom(2);
    half_bottom.per_layer[1] = normalize_piece({{0, rat("1/2")}});
    CHECK_FALSE(is_complete({cake, {top, half_bottom}}));

    const LayeredCake one = full_cake(1);
    LayeredPiece all(1);
    all.per_layer[0] = normalize_piece({{0, 1}});
    CHECK(is_complete({one, {all}}));
}

TEST_CASE("complete disjoint allocations tile every layer's measure") {
    Rng rng(43);
    for (int round = 0; round < 50; ++round) {
        // cut [0,1] into n consecutive chunks per layer, shuffled over agents
        const std::size_t n = 2 + rng.below(3);
        const LayeredCake cake = full_cake(2);
        std::vector<LayeredPiece> pieces(n, LayeredPiece(2));
        for (std::size_t l = 0; l < 2; ++l) {
            std::vector<Rational> cuts{0, 1};
            for (std::size_t k = 0; k + 1 < n; ++k) cuts.push_back(rng.fraction(16));
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t k = 0; k < n; ++k)
                pieces[k].per_layer[l] = normalize_piece({{cuts[k], cuts[k + 1]}});
        }
        const MultiAllocation alloc{cake, pieces};
        REQUIRE(is_complete(alloc));
        for (std::size_t l = 0; l < 2; ++l) {
            Rational sum = 0;
            for (const auto& piece : pieces) sum += piece.per_layer[l].measure();
            CHECK(sum == cake.layers[l].length());
        }
    }
}
