#pragma once

#include <cstddef>
#include <vector>

#include "mlcake/core.hpp"

namespace mlcake {

// The two staircase pieces produced by one vertical cut at x.
// For even m the top half of the layers goes left in `lr`; for odd
// m = 2k+1 the layers 1..k+1 go left and k+2..2k+1 go right.
struct DiagonalCut {
    Rational x;
    LayeredPiece lr;
    LayeredPiece rl;
};

DiagonalCut diagonal_cut(const LayeredCake& cake, const Rational& x);

// Indices (0-based) of the layers whose [0,x] part belongs to LR(x).
std::vector<std::size_t> lr_left_layers(std::size_t m);

// Austin-style two-knife pieces on a 2-layer cake:
//   TLR(x,y) = L1∩[0,x] ∪ L2∩[x,y] ∪ L1∩[y,1],  TRL = complement.
struct TwoKnifePieces {
    Rational x;
    Rational y;
    LayeredPiece tlr;
    LayeredPiece trl;
};

TwoKnifePieces two_knife_cut(const LayeredCake& cake2, const Rational& x, const Rational& y);

// One horizontal slice of a merged layer: which original layer it comes
// from and where it sits. Segments of a virtual layer are sorted by lo
// and pairwise share at most endpoints; gaps between them carry no cake.
struct Segment {
    std::size_t orig_layer;
    Interval iv;
};

// A cake with fewer layers assembled from seam-joined slices of a parent
// cake. Virtual-layer coordinates coincide with parent coordinates, so
// every query runs unchanged; `map` is the single source of truth for
// carrying pieces back to the parent.
struct MergedCake {
    LayeredCake cake;                      // virtual layers (their spans)
    std::vector<std::vector<Segment>> map; // per virtual layer

    std::size_t m() const { return cake.m(); }
};

enum class Side { LR, RL };

// Merge of a diagonal piece of an even-m cake into m/2 virtual layers:
// for LR, virtual layer l = L_l∩[0,x] followed by L_{l+m/2}∩[x,1]
// (mirrored for RL).
MergedCake merge_even(const LayeredCake& cake, const Rational& x, Side side);

// Merge of a diagonal piece of an odd-m cake (m = 2k+1) into k+1 virtual
// layers: L'_1 = L_1∩[0,x] and L'_l = L_l∩[0,x] ∪ L_{k+l}∩[x,1] for l >= 2
// (mirrored for RL).
MergedCake merge_odd(const LayeredCake& cake, const Rational& x, Side side);

// Builds a merged cake directly from explicit chains of segments.
MergedCake merged_from_chains(std::vector<std::vector<Segment>> chains);

// Carries a piece in virtual coordinates back to the parent cake
// (`parent_m` layers). Contiguous non-overlapping inputs stay contiguous
// and non-overlapping as long as each original layer appears in at most
// one segment of the map.
LayeredPiece lift_piece(const MergedCake& merged, const LayeredPiece& virtual_piece,
                        std::size_t parent_m);

// Lifts every piece of an allocation over `merged`, checking that inputs
// are contiguous and non-overlapping in merged coordinates first.
std::vector<LayeredPiece> lift_allocation(const MergedCake& merged,
                                          const std::vector<LayeredPiece>& virtual_pieces,
                                          std::size_t parent_m);

} // namespace mlcake
