#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mlcake/switching.hpp"
#include "mlcake/valuation.hpp"

namespace mlcake {

enum class Certificate { Exact, EnvyFree, Proportional };

std::string certificate_name(Certificate c);

struct ProtocolResult {
    MultiAllocation allocation;
    std::vector<QueryCounts> transcript; // per agent
    Certificate certificate = Certificate::Proportional;
};

// Divide-and-choose on a 2-layer cake: agent 0 cuts at its switching point,
// agent 1 takes its weakly preferred diagonal piece (tie -> LR).
// Both end up with at least half of their own total. Contiguous.
ProtocolResult cut_and_choose_2(const Instance& inst);

// Austin-style exact division for n=2, m=2: finds knives (x, y) with
// V_1(TLR) == V_2(TLR) == 1/2 exactly, so the whole 2x2 value matrix is
// 1/2. Feasible and complete; contiguity is not claimed (TLR may cover two
// stretches of the top layer).
ProtocolResult exact_2x2(const Instance& inst);

// Envy-free division of a 2-layer cake among three agents of whom two share
// one valuation. Three pieces worth exactly a third to the sharers are
// built from the shared valuation alone; the third agent picks first.
// Result order: sharer, sharer, chooser.
ProtocolResult envy_free_3x2(const LayeredCake& cake2, const Valuation& shared,
                             const Valuation& chooser);

// Same protocol driven by a 3-agent instance; the two agents with equal
// valuations are detected and the result keeps the instance's agent order.
ProtocolResult envy_free_3x2(const Instance& inst);

// Proportional division for n=3, m=3 via a cutter's three equal pieces and
// a seam-chain merge for the contested case. Contiguous.
ProtocolResult proportional_3x3(const Instance& inst);

// Proportional division of a 3-layer cake for any n >= 3: even n splits at
// a majority switching point of the merged-top view, odd n trims first.
ProtocolResult proportional_3layer_n(const Instance& inst);

// Recursive dispatcher for m = 2^a * 3^b layers (b <= 1) and n >= m agents:
// n > m trims, even m halves at a majority switching point, base cases are
// m in {1,2,3}. Throws unsupported_shape_error for any other m.
ProtocolResult proportional_recursive(const Instance& inst);

// True iff m = 2^a * 3^b with b <= 1 (the shapes the dispatcher supports).
bool supported_shape(std::size_t m);

struct TrimStep {
    std::size_t recipient; // agent index in the input instance
    std::size_t layer;
    Rational mark;
    LayeredPiece piece;    // worth exactly 1/n of the recipient's total
    Instance remainder;    // notched cake, recipient removed, not renormalized
};

// One trimming round: every agent who values some layer at least 1/n of its
// total marks the prefix worth exactly that; the layer with the most markers
// is cut at the smallest mark and handed to the lowest-index minimal marker.
// Everyone else values the removed piece at most 1/n of their total.
TrimStep trim_step(const Instance& inst);

// Protocol selector used by the CLI: cutchoose2 | exact2x2 | ef3x2 |
// prop3x3 | prop3n | prop.
ProtocolResult run_protocol(const std::string& id, const Instance& inst);

} // namespace mlcake
