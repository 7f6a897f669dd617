#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mlcake/protocols.hpp"
#include "mlcake/valuation.hpp"

namespace mlcake {

// entries[i][j] = V_i(P_j); each row of a complete allocation sums to the
// agent's total.
struct ValueMatrix {
    std::vector<std::vector<Rational>> entries;
};

ValueMatrix value_matrix(const Instance& inst, const MultiAllocation& alloc);

// All four fairness predicates plus the structural checks, evaluated
// exactly, with exhaustive witnesses for every failure.
struct FairnessReport {
    bool proportional = false;
    bool envy_free = false;
    bool equitable = false;
    bool exact = false;
    bool feasible = false;
    bool contiguous = false;
    bool complete = false;

    std::vector<std::size_t> proportional_witnesses;                    // agents
    std::vector<std::pair<std::size_t, std::size_t>> envy_witnesses;    // (i, j)
    std::vector<std::pair<std::size_t, std::size_t>> equitable_witnesses;
    std::vector<std::pair<std::size_t, std::size_t>> exact_witnesses;
    std::vector<std::size_t> feasibility_witnesses;                     // agents
    std::vector<std::size_t> contiguity_witnesses;                      // agents
    std::vector<std::size_t> completeness_witnesses;                    // layers

    // Does the report back the certificate a protocol claims?
    bool supports(Certificate c) const;
};

FairnessReport fairness_report(const Instance& inst, const MultiAllocation& alloc);

// Midpoint Riemann sum of agent `agent`'s density over `piece`, on a grid
// refined with every density breakpoint and piece endpoint. Exact for step
// densities. Recomputes everything from raw breakpoints with a reversed
// cell scan, sharing no code with the query layer.
Rational riemann_oracle(const Instance& inst, std::size_t agent, const LayeredPiece& piece,
                        int resolution);

struct TwoKnifeSearch {
    Rational deficiency; // best |V_1(TLR)-1/2| + |V_2(TLR)-1/2|
    Rational x;
    Rational y;
};

// Brute-force scan of all grid-aligned knife pairs x <= y on a 2x2 instance,
// valued through the Riemann oracle. Grid at most 64.
TwoKnifeSearch exhaustive_2x2_oracle(const Instance& inst, int grid);

} // namespace mlcake
