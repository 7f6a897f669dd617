#include "mlcake/core.hpp"

#include <algorithm>

namespace mlcake {

bool try_intersect(const Interval& a, const Interval& b, Interval& out) {
    const Rational& lo = max(a.lo, b.lo);
    const Rational& hi = min(a.hi, b.hi);
    if (hi < lo) return false;
    out = Interval(lo, hi);
    return true;
}

bool overlaps_positively(const Interval& a, const Interval& b) {
    return max(a.lo, b.lo) < min(a.hi, b.hi);
}

Rational Piece::measure() const {
    Rational total = 0;
    for (const auto& iv : intervals) total += iv.length();
    return total;
}

Piece normalize_piece(std::vector<Interval> raw) {
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    Piece out;
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.lo <= out.intervals.back().hi) {
            if (out.intervals.back().hi < iv.hi) out.intervals.back().hi = iv.hi;
        } else {
            out.intervals.push_back(iv);
        }
    }
    std::erase_if(out.intervals, [](const Interval& iv) { return iv.degenerate(); });
    return out;
}

Piece intersect(const Piece& p, const Interval& window) {
    std::vector<Interval> kept;
    for (const auto& iv : p.intervals) {
        Interval cut;
        if (try_intersect(iv, window, cut) && !cut.degenerate()) kept.push_back(cut);
    }
    Piece out;
    out.intervals = std::move(kept); // already sorted and disjoint
    return out;
}

Piece unite(const Piece& a, const Piece& b) {
    std::vector<Interval> all = a.intervals;
    all.insert(all.end(), b.intervals.begin(), b.intervals.end());
    return normalize_piece(std::move(all));
}

Piece subtract(const Interval& window, const Piece& p) {
    std::vector<Interval> gaps;
    Rational cursor = window.lo;
    for (const auto& iv : p.intervals) {
        if (iv.hi <= window.lo) continue;
        if (window.hi <= iv.lo) break;
        const Rational& start = max(iv.lo, window.lo);
        if (cursor < start) gaps.emplace_back(cursor, start);
        cursor = max(cursor, min(iv.hi, window.hi));
    }
    if (cursor < window.hi) gaps.emplace_back(cursor, window.hi);
    Piece out;
    out.intervals = std::move(gaps);
    return out;
}

LayeredCake full_cake(std::size_t m) {
    LayeredCake cake;
    cake.layers.assign(m, Interval(0, 1));
    return cake;
}

bool LayeredPiece::empty() const {
    for (const auto& p : per_layer)
        if (!p.empty()) return false;
    return true;
}

Rational LayeredPiece::measure() const {
    Rational total = 0;
    for (const auto& p : per_layer) total += p.measure();
    return total;
}

bool is_contiguous(const LayeredPiece& p) {
    for (const auto& layer : p.per_layer)
        if (layer.intervals.size() > 1) return false;
    return true;
}

bool is_non_overlapping(const LayeredPiece& p) {
    const std::size_t m = p.per_layer.size();
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = l + 1; k < m; ++k)
            for (const auto& a : p.per_layer[l].intervals)
                for (const auto& b : p.per_layer[k].intervals)
                    if (overlaps_positively(a, b)) return false;
    return true;
}

bool is_complete(const MultiAllocation& a) {
    for (std::size_t l = 0; l < a.cake.m(); ++l) {
        Piece covered;
        for (const auto& piece : a.pieces)
            if (l < piece.per_layer.size()) covered = unite(covered, piece.per_layer[l]);
        const Interval& layer = a.cake.layers[l];
        if (layer.degenerate()) {
            if (!covered.empty()) return false;
        } else if (covered.intervals != std::vector<Interval>{layer}) {
            return false;
        }
    }
    return true;
}

bool is_exact_partition(const MultiAllocation& a) {
    if (!is_complete(a)) return false;
    for (std::size_t l = 0; l < a.cake.m(); ++l) {
        Rational total = 0;
        for (const auto& piece : a.pieces)
            if (l < piece.per_layer.size()) total += piece.per_layer[l].measure();
        if (total != a.cake.layers[l].length()) return false;
    }
    return true;
}

} // namespace mlcake
