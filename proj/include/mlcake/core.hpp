#pragma once

#include <cstddef>
#include <vector>

#include "mlcake/rational.hpp"

namespace mlcake {

// Closed subinterval [lo, hi] of [0,1]. Degenerate (lo == hi) intervals
// are allowed as values but never stored inside a normalized Piece.
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (hi < lo) throw validation_error("interval with lo > hi");
    }

    Rational length() const { return hi - lo; }
    bool degenerate() const { return lo == hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Intersection clamped to a valid interval; empty results come out degenerate.
// Returns false when the inputs do not even share an endpoint.
bool try_intersect(const Interval& a, const Interval& b, Interval& out);

// True iff the two intervals share a set of positive measure.
bool overlaps_positively(const Interval& a, const Interval& b);

// Finite union of disjoint, positively separated or exactly abutting-merged
// intervals, sorted by lo. Always produced through normalize_piece.
struct Piece {
    std::vector<Interval> intervals;

    bool empty() const { return intervals.empty(); }
    Rational measure() const;

    friend bool operator==(const Piece& a, const Piece& b) {
        return a.intervals == b.intervals;
    }
};

// Sorts, merges abutting/overlapping intervals and drops zero-length ones.
// Measure is preserved; the result is idempotent under re-normalization.
Piece normalize_piece(std::vector<Interval> raw);

Piece intersect(const Piece& p, const Interval& window);
Piece unite(const Piece& a, const Piece& b);
// Part of `window` not covered by `p`.
Piece subtract(const Interval& window, const Piece& p);

struct LayeredCake {
    std::vector<Interval> layers;

    std::size_t m() const { return layers.size(); }

    friend bool operator==(const LayeredCake& a, const LayeredCake& b) {
        return a.layers == b.layers;
    }
};

// Cake with the given number of copies of [0,1].
LayeredCake full_cake(std::size_t m);

// One piece per layer of the governing cake (possibly empty).
struct LayeredPiece {
    std::vector<Piece> per_layer;

    explicit LayeredPiece(std::size_t m = 0) : per_layer(m) {}

    std::size_t layers() const { return per_layer.size(); }
    bool empty() const;
    Rational measure() const;

    friend bool operator==(const LayeredPiece& a, const LayeredPiece& b) {
        return a.per_layer == b.per_layer;
    }
};

struct MultiAllocation {
    LayeredCake cake;
    std::vector<LayeredPiece> pieces; // indexed by agent

    std::size_t agents() const { return pieces.size(); }
};

// Every per-layer piece is a single interval (or empty).
bool is_contiguous(const LayeredPiece& p);

// No two intervals on different layers share positive measure
// (a single shared endpoint is fine).
bool is_non_overlapping(const LayeredPiece& p);

// Per layer, the union of all agents' pieces equals the layer exactly.
// Assumes the pieces are pairwise measure-disjoint per layer.
bool is_complete(const MultiAllocation& a);

// Union over agents equals each layer AND the measures tile it exactly,
// which together also rule out overlap between agents.
bool is_exact_partition(const MultiAllocation& a);

} // namespace mlcake
