#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mlcake/core.hpp"
#include "mlcake/cuts.hpp"

namespace mlcake {

// Piecewise-constant density over one layer. Breakpoints span the layer
// exactly; values[j] is the density on [breakpoints[j], breakpoints[j+1]].
// A degenerate layer has a single breakpoint and no cells. The cumulative
// integral at every breakpoint is precomputed, so cut queries solve one
// linear equation inside one cell.
class StepDensity {
  public:
    StepDensity() = default;
    StepDensity(std::vector<Rational> breakpoints, std::vector<Rational> values);

    static StepDensity uniform(const Interval& span, const Rational& total_mass);
    static StepDensity zero(const Interval& span);

    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& values() const { return values_; }
    const Interval& span() const { return span_; }
    const Rational& total() const { return cumulative_.back(); }

    // V([x,y]) for [x,y] inside the layer.
    Rational eval(const Rational& x, const Rational& y) const;
    // Minimum y >= x with V([x,y]) == p; throws unattainable_error when
    // p exceeds the value left of the layer end.
    Rational cut(const Rational& x, const Rational& p) const;

    // Same density restricted to a subinterval of the layer.
    StepDensity restrict_to(const Interval& sub) const;

    // Equal as functions (compared on merged equal-value cells).
    bool same_function(const StepDensity& other) const;

  private:
    Rational cumulative_at(const Rational& x) const;

    std::vector<Rational> breakpoints_;
    std::vector<Rational> values_;
    std::vector<Rational> cumulative_;
    Interval span_;
};

// Continuous piecewise-linear function on [0,1] with exact breakpoints.
struct PiecewiseLinear {
    std::vector<Rational> xs; // strictly increasing, xs.front()=0, xs.back()=1
    std::vector<Rational> ys;

    Rational eval(const Rational& x) const;
    // Minimum x with value == target, if attained.
    std::optional<Rational> first_hit(const Rational& target) const;
    // Leftmost maximal interval on which the value equals target.
    std::optional<std::pair<Rational, Rational>> level_span(const Rational& target) const;
    // Isolated roots plus endpoints of root intervals of value == target,
    // sorted increasing.
    std::vector<Rational> level_points(const Rational& target) const;
};

// One agent's densities, one per layer of the governing cake. Totals need
// not be 1: protocol recursion restricts valuations to sub-cakes. Instances
// loaded from documents are validated to total exactly 1.
struct Valuation {
    std::vector<StepDensity> densities;

    Rational total() const;
};

struct Instance {
    LayeredCake cake;
    std::vector<Valuation> agents;

    std::size_t n() const { return agents.size(); }
    std::size_t m() const { return cake.m(); }
};

// Checks layer spans, non-negative densities and exact normalization;
// throws validation_error naming the offending agent.
void validate_instance(const Instance& inst);

Rational eval_short(const Valuation& v, std::size_t layer, const Rational& x, const Rational& y);
Rational cut_short(const Valuation& v, std::size_t layer, const Rational& x, const Rational& p);

// Value of one layered piece; additive over layers and intervals.
Rational value_of(const Valuation& v, const LayeredPiece& piece);

// V(LR(x, cake)) with the parity-appropriate diagonal cut.
Rational eval_long(const Valuation& v, const LayeredCake& cake, const Rational& x);
// Minimum x with V(LR(x)) == p; throws unattainable_error if p is outside
// the range of the cut-value function.
Rational cut_long(const Valuation& v, const LayeredCake& cake, const Rational& p);

// x -> V(LR(x, cake)) as an explicit piecewise-linear function, built by one
// sweep over all density cell boundaries.
PiecewiseLinear lr_value_function(const Valuation& v, const LayeredCake& cake);

// Valuation seen through a merged cake: per virtual layer, the parent
// densities of its segments stitched together with zero-density gaps.
Valuation transport(const Valuation& parent, const MergedCake& merged);

// Valuation on a cake whose layers were shrunk (trimming): densities
// restricted layer by layer.
Valuation restrict_valuation(const Valuation& v, const LayeredCake& sub_cake);

struct QueryCounts {
    long long short_eval = 0;
    long long short_cut = 0;
    long long long_eval = 0;
    long long long_cut = 0;

    friend bool operator==(const QueryCounts&, const QueryCounts&) = default;
};

// Counting proxy for the four query kinds, keyed by original agent index.
// Confined to a single protocol run; not thread-safe by contract.
class QuerySession {
  public:
    explicit QuerySession(std::size_t n_agents) : counts_(n_agents) {}

    Rational eval_short(std::size_t agent, const Valuation& v, std::size_t layer,
                        const Rational& x, const Rational& y) {
        ++counts_[agent].short_eval;
        return mlcake::eval_short(v, layer, x, y);
    }
    Rational cut_short(std::size_t agent, const Valuation& v, std::size_t layer,
                       const Rational& x, const Rational& p) {
        ++counts_[agent].short_cut;
        return mlcake::cut_short(v, layer, x, p);
    }
    Rational eval_long(std::size_t agent, const Valuation& v, const LayeredCake& cake,
                       const Rational& x) {
        ++counts_[agent].long_eval;
        return mlcake::eval_long(v, cake, x);
    }
    Rational cut_long(std::size_t agent, const Valuation& v, const LayeredCake& cake,
                      const Rational& p) {
        ++counts_[agent].long_cut;
        return mlcake::cut_long(v, cake, p);
    }

    // One short evaluation per interval of the piece.
    Rational value(std::size_t agent, const Valuation& v, const LayeredPiece& piece) {
        for (const auto& layer : piece.per_layer)
            counts_[agent].short_eval += static_cast<long long>(layer.intervals.size());
        return value_of(v, piece);
    }

    void note_long_cut(std::size_t agent) { ++counts_[agent].long_cut; }
    void note_long_eval(std::size_t agent) { ++counts_[agent].long_eval; }
    void note_short_cut(std::size_t agent) { ++counts_[agent].short_cut; }
    void note_short_eval(std::size_t agent) { ++counts_[agent].short_eval; }

    const std::vector<QueryCounts>& counts() const { return counts_; }

  private:
    std::vector<QueryCounts> counts_;
};

} // namespace mlcake
