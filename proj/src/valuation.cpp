#include "mlcake/valuation.hpp"

#include <algorithm>
#include <map>

namespace mlcake {

StepDensity::StepDensity(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty()) throw validation_error("density needs at least one breakpoint");
    if (values_.size() + 1 != breakpoints_.size() && !(breakpoints_.size() == 1 && values_.empty()))
        throw validation_error("density breakpoint/value count mismatch");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j)
        if (!(breakpoints_[j - 1] < breakpoints_[j]))
            throw validation_error("density breakpoints must be strictly increasing");
    cumulative_.reserve(breakpoints_.size());
    cumulative_.push_back(0);
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (values_[j] < Rational(0)) throw validation_error("negative density value");
        cumulative_.push_back(cumulative_.back() +
                              values_[j] * (breakpoints_[j + 1] - breakpoints_[j]));
    }
    span_ = Interval(breakpoints_.front(), breakpoints_.back());
}

StepDensity StepDensity::uniform(const Interval& span, const Rational& total_mass) {
    if (span.degenerate()) {
        if (!total_mass.is_zero())
            throw validation_error("uniform mass on a degenerate layer");
        return zero(span);
    }
    return StepDensity({span.lo, span.hi}, {total_mass / span.length()});
}

StepDensity StepDensity::zero(const Interval& span) {
    if (span.degenerate()) return StepDensity({span.lo}, {});
    return StepDensity({span.lo, span.hi}, {Rational(0)});
}

Rational StepDensity::cumulative_at(const Rational& x) const {
    // x must lie within the span
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t cell = static_cast<std::size_t>(it - breakpoints_.begin());
    if (cell == 0) return 0;
    const std::size_t j = std::min(cell - 1, values_.size() == 0 ? 0 : values_.size() - 1);
    if (values_.empty()) return 0;
    return cumulative_[j] + values_[j] * (x - breakpoints_[j]);
}

Rational StepDensity::eval(const Rational& x, const Rational& y) const {
    if (y < x) throw validation_error("eval with x > y");
    if (x < span_.lo || span_.hi < y) throw validation_error("interval outside layer");
    return cumulative_at(y) - cumulative_at(x);
}

Rational StepDensity::cut(const Rational& x, const Rational& p) const {
    if (p < Rational(0)) throw validation_error("cut with negative target");
    if (x < span_.lo || span_.hi < x) throw validation_error("cut point outside layer");
    if (p.is_zero()) return x; // minimality
    Rational acc = 0;
    // Walk cells right of x; the first cell whose gain reaches p holds the
    // answer, so a plateau is never entered once p is met at its left edge.
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (breakpoints_[j + 1] <= x) continue;
        const Rational start = max(x, breakpoints_[j]);
        const Rational gain = values_[j] * (breakpoints_[j + 1] - start);
        if (acc + gain >= p) {
            return start + (p - acc) / values_[j];
        }
        acc += gain;
    }
    throw unattainable_error("cut target exceeds remaining value on layer");
}

StepDensity StepDensity::restrict_to(const Interval& sub) const {
    if (sub.lo < span_.lo || span_.hi < sub.hi)
        throw validation_error("restriction outside layer");
    if (sub.degenerate()) return StepDensity({sub.lo}, {});
    std::vector<Rational> bps{sub.lo};
    std::vector<Rational> vals;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        const Rational lo = max(sub.lo, breakpoints_[j]);
        const Rational hi = min(sub.hi, breakpoints_[j + 1]);
        if (hi <= lo) continue;
        bps.push_back(hi);
        vals.push_back(values_[j]);
    }
    return StepDensity(std::move(bps), std::move(vals));
}

namespace {

// Collapses adjacent equal-value cells so equality means equality as functions.
std::pair<std::vector<Rational>, std::vector<Rational>> canonical_cells(const StepDensity& d) {
    std::vector<Rational> bps{d.span().lo};
    std::vector<Rational> vals;
    for (std::size_t j = 0; j < d.values().size(); ++j) {
        if (!vals.empty() && vals.back() == d.values()[j]) {
            bps.back() = d.breakpoints()[j + 1];
        } else {
            vals.push_back(d.values()[j]);
            bps.push_back(d.breakpoints()[j + 1]);
        }
    }
    return {std::move(bps), std::move(vals)};
}

} // namespace

bool StepDensity::same_function(const StepDensity& other) const {
    return canonical_cells(*this) == canonical_cells(other);
}

Rational PiecewiseLinear::eval(const Rational& x) const {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    if (j == 0) throw validation_error("evaluation left of domain");
    if (j == xs.size()) {
        if (x == xs.back()) return ys.back();
        throw validation_error("evaluation right of domain");
    }
    --j;
    if (x == xs[j]) return ys[j];
    return ys[j] + (ys[j + 1] - ys[j]) * (x - xs[j]) / (xs[j + 1] - xs[j]);
}

std::optional<Rational> PiecewiseLinear::first_hit(const Rational& target) const {
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const Rational& ya = ys[j];
        const Rational& yb = ys[j + 1];
        if (ya == target) return xs[j];
        if ((ya < target && target <= yb) || (yb <= target && target < ya))
            return xs[j] + (target - ya) * (xs[j + 1] - xs[j]) / (yb - ya);
    }
    if (ys.back() == target) return xs.back();
    return std::nullopt;
}

std::optional<std::pair<Rational, Rational>> PiecewiseLinear::level_span(
    const Rational& target) const {
    const auto start = first_hit(target);
    if (!start) return std::nullopt;
    Rational x0 = *start;
    Rational x1 = x0;
    // extend across consecutive segments that stay flat at the target
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        if (xs[j] == x1 && ys[j] == target && ys[j + 1] == target) x1 = xs[j + 1];
    }
    return std::make_pair(std::move(x0), std::move(x1));
}

std::vector<Rational> PiecewiseLinear::level_points(const Rational& target) const {
    std::vector<Rational> points;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const Rational& ya = ys[j];
        const Rational& yb = ys[j + 1];
        if (ya == target) points.push_back(xs[j]);
        if (yb == target) points.push_back(xs[j + 1]);
        if ((ya < target && target < yb) || (yb < target && target < ya))
            points.push_back(xs[j] + (target - ya) * (xs[j + 1] - xs[j]) / (yb - ya));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

Rational Valuation::total() const {
    Rational t = 0;
    for (const auto& d : densities) t += d.total();
    return t;
}

void validate_instance(const Instance& inst) {
    if (inst.n() == 0) throw validation_error("instance needs at least one agent");
    if (inst.m() == 0) throw validation_error("instance needs at least one layer");
    for (const auto& layer : inst.cake.layers)
        if (layer.lo < Rational(0) || Rational(1) < layer.hi)
            throw validation_error("layer outside [0,1]");
    for (std::size_t i = 0; i < inst.n(); ++i) {
        const auto& agent = inst.agents[i];
        const std::string who = "agent " + std::to_string(i);
        if (agent.densities.size() != inst.m())
            throw validation_error(who + ": density count differs from layer count");
        for (std::size_t l = 0; l < inst.m(); ++l) {
            if (!(agent.densities[l].span() == inst.cake.layers[l]))
                throw validation_error(who + ": density does not span layer " +
                                       std::to_string(l));
        }
        if (agent.total() != Rational(1))
            throw validation_error(who + ": valuation total is " + agent.total().str() +
                                   ", expected 1");
    }
}

Rational eval_short(const Valuation& v, std::size_t layer, const Rational& x,
                    const Rational& y) {
    if (layer >= v.densities.size()) throw validation_error("layer index out of range");
    return v.densities[layer].eval(x, y);
}

Rational cut_short(const Valuation& v, std::size_t layer, const Rational& x,
                   const Rational& p) {
    if (layer >= v.densities.size()) throw validation_error("layer index out of range");
    return v.densities[layer].cut(x, p);
}

Rational value_of(const Valuation& v, const LayeredPiece& piece) {
    if (piece.layers() != v.densities.size())
        throw validation_error("piece does not match valuation layer count");
    Rational total = 0;
    for (std::size_t l = 0; l < piece.layers(); ++l)
        for (const auto& iv : piece.per_layer[l].intervals)
            total += v.densities[l].eval(iv.lo, iv.hi);
    return total;
}

Rational eval_long(const Valuation& v, const LayeredCake& cake, const Rational& x) {
    return value_of(v, diagonal_cut(cake, x).lr);
}

PiecewiseLinear lr_value_function(const Valuation& v, const LayeredCake& cake) {
    const std::size_t m = cake.m();
    if (v.densities.size() != m) throw validation_error("valuation does not match cake");
    const std::size_t left_count = m % 2 == 0 ? m / 2 : m / 2 + 1;
    // slope(x) = sum of left-group densities at x minus right-group ones
    std::map<Rational, Rational> slope_delta;
    Rational at_zero = 0;
    for (std::size_t l = 0; l < m; ++l) {
        const bool left = l < left_count;
        if (!left) at_zero += v.densities[l].total();
        const auto& d = v.densities[l];
        for (std::size_t j = 0; j < d.values().size(); ++j) {
            const Rational w = left ? d.values()[j] : -d.values()[j];
            if (w.is_zero()) continue;
            slope_delta[d.breakpoints()[j]] += w;
            slope_delta[d.breakpoints()[j + 1]] -= w;
        }
    }
    PiecewiseLinear f;
    f.xs.push_back(0);
    f.ys.push_back(at_zero);
    Rational slope = 0;
    auto it = slope_delta.begin();
    if (it != slope_delta.end() && it->first == Rational(0)) {
        slope += it->second;
        ++it;
    }
    for (; it != slope_delta.end() && it->first < Rational(1); ++it) {
        f.ys.push_back(f.ys.back() + slope * (it->first - f.xs.back()));
        f.xs.push_back(it->first);
        slope += it->second;
    }
    f.ys.push_back(f.ys.back() + slope * (Rational(1) - f.xs.back()));
    f.xs.push_back(1);
    return f;
}

Rational cut_long(const Valuation& v, const LayeredCake& cake, const Rational& p) {
    const PiecewiseLinear f = lr_value_function(v, cake);
    const auto hit = f.first_hit(p);
    if (!hit) throw unattainable_error("long cut target not attained by any x");
    return *hit;
}

Valuation transport(const Valuation& parent, const MergedCake& merged) {
    Valuation out;
    out.densities.reserve(merged.m());
    for (std::size_t vl = 0; vl < merged.m(); ++vl) {
        const auto& chain = merged.map[vl];
        if (chain.empty()) {
            out.densities.push_back(StepDensity::zero(merged.cake.layers[vl]));
            continue;
        }
        std::vector<Rational> bps{chain.front().iv.lo};
        std::vector<Rational> vals;
        for (const auto& seg : chain) {
            if (bps.back() < seg.iv.lo) { // gap between seam segments: no cake
                vals.push_back(0);
                bps.push_back(seg.iv.lo);
            }
            const StepDensity part =
                parent.densities[seg.orig_layer].restrict_to(seg.iv);
            for (std::size_t j = 0; j < part.values().size(); ++j) {
                vals.push_back(part.values()[j]);
                bps.push_back(part.breakpoints()[j + 1]);
            }
        }
        if (bps.size() == 1)
            out.densities.push_back(StepDensity::zero(Interval(bps[0], bps[0])));
        else
            out.densities.push_back(StepDensity(std::move(bps), std::move(vals)));
    }
    return out;
}

Valuation restrict_valuation(const Valuation& v, const LayeredCake& sub_cake) {
    if (v.densities.size() != sub_cake.m())
        throw validation_error("valuation does not match cake");
    Valuation out;
    out.densities.reserve(sub_cake.m());
    for (std::size_t l = 0; l < sub_cake.m(); ++l)
        out.densities.push_back(v.densities[l].restrict_to(sub_cake.layers[l]));
    return out;
}

} // namespace mlcake
