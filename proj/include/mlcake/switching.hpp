#pragma once

#include <cstddef>
#include <vector>

#include "mlcake/valuation.hpp"

namespace mlcake {

// d(x) = V(LR(x)) - V(RL(x)) for one agent, kept as an exact
// piecewise-linear function. d(0) == -d(1) always.
struct PreferenceMargin {
    std::size_t agent;
    PiecewiseLinear d;
};

PreferenceMargin preference_margin(std::size_t agent, const Valuation& v,
                                   const LayeredCake& cake);

// x with V(LR(x)) == V(RL(x)) == V(cake)/2 exactly. The solution set of the
// piecewise-linear cut-value function is a union of points and intervals;
// the midpoint of the leftmost maximal solution interval is returned, so a
// flat function yields an interior point rather than 0.
Rational switching_point(const Valuation& v, const LayeredCake& cake,
                         QuerySession* session = nullptr, std::size_t agent = 0);

struct MajoritySplit {
    Rational x;
    std::vector<std::size_t> group_lr; // weakly prefer LR(x), exactly n/2
    std::vector<std::size_t> group_rl; // weakly prefer RL(x), exactly n/2
};

// Majority switching point for an even number of agents: candidate cut
// points are the zeros (and zero-interval endpoints) of all margins,
// scanned in increasing order with 0 and 1 as fallbacks; the first x at
// which at most n/2 agents strictly prefer either side is kept. Tied
// agents fill the smaller group in index order.
MajoritySplit majority_switching_point(const std::vector<Valuation>& agents,
                                       const LayeredCake& cake,
                                       QuerySession* session = nullptr,
                                       const std::vector<std::size_t>* agent_ids = nullptr);

} // namespace mlcake
