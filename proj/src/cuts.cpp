#include "mlcake/cuts.hpp"

#include <algorithm>

namespace mlcake {

std::vector<std::size_t> lr_left_layers(std::size_t m) {
    // even m: layers 0..m/2-1; odd m = 2k+1: layers 0..k
    const std::size_t count = m % 2 == 0 ? m / 2 : m / 2 + 1;
    std::vector<std::size_t> left(count);
    for (std::size_t l = 0; l < count; ++l) left[l] = l;
    return left;
}

DiagonalCut diagonal_cut(const LayeredCake& cake, const Rational& x) {
    if (x < Rational(0) || Rational(1) < x)
        throw validation_error("diagonal cut point outside [0,1]");
    const std::size_t m = cake.m();
    const std::size_t left_count = m % 2 == 0 ? m / 2 : m / 2 + 1;
    DiagonalCut cut;
    cut.x = x;
    cut.lr = LayeredPiece(m);
    cut.rl = LayeredPiece(m);
    const Interval left_window(0, x);
    const Interval right_window(x, 1);
    for (std::size_t l = 0; l < m; ++l) {
        const Piece layer_piece = normalize_piece({cake.layers[l]});
        if (l < left_count) {
            cut.lr.per_layer[l] = intersect(layer_piece, left_window);
            cut.rl.per_layer[l] = intersect(layer_piece, right_window);
        } else {
            cut.lr.per_layer[l] = intersect(layer_piece, right_window);
            cut.rl.per_layer[l] = intersect(layer_piece, left_window);
        }
    }
    return cut;
}

TwoKnifePieces two_knife_cut(const LayeredCake& cake2, const Rational& x, const Rational& y) {
    if (cake2.m() != 2) throw validation_error("two-knife cut requires a 2-layer cake");
    if (y < x) throw validation_error("two-knife cut requires x <= y");
    const Piece top = normalize_piece({cake2.layers[0]});
    const Piece bottom = normalize_piece({cake2.layers[1]});
    TwoKnifePieces pieces;
    pieces.x = x;
    pieces.y = y;
    pieces.tlr = LayeredPiece(2);
    pieces.trl = LayeredPiece(2);
    pieces.tlr.per_layer[0] =
        unite(intersect(top, Interval(0, x)), intersect(top, Interval(y, 1)));
    pieces.tlr.per_layer[1] = intersect(bottom, Interval(x, y));
    pieces.trl.per_layer[0] = intersect(top, Interval(x, y));
    pieces.trl.per_layer[1] =
        unite(intersect(bottom, Interval(0, x)), intersect(bottom, Interval(y, 1)));
    return pieces;
}

namespace {

void append_segment(std::vector<Segment>& chain, std::size_t orig_layer,
                    const Interval& layer, const Interval& window) {
    Interval cut;
    if (try_intersect(layer, window, cut) && !cut.degenerate())
        chain.push_back({orig_layer, cut});
}

MergedCake finish_merge(std::vector<std::vector<Segment>> chains) {
    MergedCake merged;
    merged.map = std::move(chains);
    for (auto& chain : merged.map) {
        std::sort(chain.begin(), chain.end(), [](const Segment& a, const Segment& b) {
            return a.iv.lo < b.iv.lo || (a.iv.lo == b.iv.lo && a.orig_layer < b.orig_layer);
        });
        for (std::size_t i = 1; i < chain.size(); ++i)
            if (chain[i].iv.lo < chain[i - 1].iv.hi)
                throw internal_error("merged layer segments overlap");
        if (chain.empty())
            merged.cake.layers.emplace_back(0, 0);
        else
            merged.cake.layers.emplace_back(chain.front().iv.lo, chain.back().iv.hi);
    }
    return merged;
}

MergedCake merge_pairs(const LayeredCake& cake, const Rational& x, Side side,
                       std::size_t virtual_count, std::size_t pair_offset,
                       std::size_t first_solo) {
    // Virtual layer l pairs original layer l with layer l + pair_offset;
    // layers below `first_solo` contribute only their own side of the cut.
    const Interval left_window(0, x);
    const Interval right_window(x, 1);
    const Interval& own = side == Side::LR ? left_window : right_window;
    const Interval& partner = side == Side::LR ? right_window : left_window;
    std::vector<std::vector<Segment>> chains(virtual_count);
    for (std::size_t l = 0; l < virtual_count; ++l) {
        append_segment(chains[l], l, cake.layers[l], own);
        if (l >= first_solo) {
            const std::size_t mate = l + pair_offset;
            append_segment(chains[l], mate, cake.layers[mate], partner);
        }
    }
    return finish_merge(std::move(chains));
}

} // namespace

MergedCake merge_even(const LayeredCake& cake, const Rational& x, Side side) {
    const std::size_t m = cake.m();
    if (m == 0 || m % 2 != 0) throw validation_error("merge_even requires even m");
    return merge_pairs(cake, x, side, m / 2, m / 2, 0);
}

MergedCake merge_odd(const LayeredCake& cake, const Rational& x, Side side) {
    const std::size_t m = cake.m();
    if (m % 2 != 1) throw validation_error("merge_odd requires odd m");
    const std::size_t k = m / 2;
    return merge_pairs(cake, x, side, k + 1, k, 1);
}

MergedCake merged_from_chains(std::vector<std::vector<Segment>> chains) {
    return finish_merge(std::move(chains));
}

LayeredPiece lift_piece(const MergedCake& merged, const LayeredPiece& virtual_piece,
                        std::size_t parent_m) {
    if (virtual_piece.layers() != merged.m())
        throw validation_error("piece does not match merged cake");
    std::vector<std::vector<Interval>> collected(parent_m);
    for (std::size_t vl = 0; vl < merged.m(); ++vl) {
        for (const auto& iv : virtual_piece.per_layer[vl].intervals) {
            for (const auto& seg : merged.map[vl]) {
                Interval part;
                if (try_intersect(iv, seg.iv, part) && !part.degenerate())
                    collected[seg.orig_layer].push_back(part);
            }
        }
    }
    LayeredPiece lifted(parent_m);
    for (std::size_t l = 0; l < parent_m; ++l)
        lifted.per_layer[l] = normalize_piece(std::move(collected[l]));
    return lifted;
}

std::vector<LayeredPiece> lift_allocation(const MergedCake& merged,
                                          const std::vector<LayeredPiece>& virtual_pieces,
                                          std::size_t parent_m) {
    std::vector<LayeredPiece> out;
    out.reserve(virtual_pieces.size());
    for (const auto& vp : virtual_pieces) {
        if (!is_contiguous(vp) || !is_non_overlapping(vp))
            throw validation_error("piece is not contiguous/non-overlapping in merged coordinates");
        out.push_back(lift_piece(merged, vp, parent_m));
    }
    return out;
}

} // namespace mlcake
