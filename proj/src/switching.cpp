#include "mlcake/switching.hpp"

#include <algorithm>

namespace mlcake {

PreferenceMargin preference_margin(std::size_t agent, const Valuation& v,
                                   const LayeredCake& cake) {
    PiecewiseLinear s = lr_value_function(v, cake);
    const Rational total = v.total();
    for (auto& y : s.ys) y = y * 2 - total; // LR - RL = 2*LR - total
    return PreferenceMargin{agent, std::move(s)};
}

Rational switching_point(const Valuation& v, const LayeredCake& cake,
                         QuerySession* session, std::size_t agent) {
    if (session) session->note_long_cut(agent);
    const PiecewiseLinear s = lr_value_function(v, cake);
    const Rational target = v.total() / 2;
    const auto span = s.level_span(target);
    if (!span) throw internal_error("cut-value function misses its own half total");
    return midpoint(span->first, span->second);
}

MajoritySplit majority_switching_point(const std::vector<Valuation>& agents,
                                       const LayeredCake& cake, QuerySession* session,
                                       const std::vector<std::size_t>* agent_ids) {
    const std::size_t n = agents.size();
    if (n == 0 || n % 2 != 0)
        throw validation_error("majority switching point needs an even number of agents");
    std::vector<PiecewiseLinear> margins;
    margins.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        margins.push_back(preference_margin(i, agents[i], cake).d);

    // Zeros of every margin first, in increasing order; the domain endpoints
    // only as fallbacks after them.
    std::vector<Rational> candidates;
    for (const auto& d : margins)
        for (const auto& z : d.level_points(0)) candidates.push_back(z);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const Rational& edge : {Rational(0), Rational(1)})
        if (std::find(candidates.begin(), candidates.end(), edge) == candidates.end())
            candidates.push_back(edge);

    for (const auto& x : candidates) {
        std::vector<std::size_t> prefer_lr, prefer_rl, tied;
        for (std::size_t i = 0; i < n; ++i) {
            if (session) session->note_long_eval(agent_ids ? (*agent_ids)[i] : i);
            const int side = margins[i].eval(x).sign();
            if (side > 0) prefer_lr.push_back(i);
            else if (side < 0) prefer_rl.push_back(i);
            else tied.push_back(i);
        }
        if (prefer_lr.size() > n / 2 || prefer_rl.size() > n / 2) continue;
        for (const std::size_t i : tied) {
            if (prefer_lr.size() < n / 2) prefer_lr.push_back(i);
            else prefer_rl.push_back(i);
        }
        std::sort(prefer_lr.begin(), prefer_lr.end());
        std::sort(prefer_rl.begin(), prefer_rl.end());
        if (prefer_lr.size() != n / 2 || prefer_rl.size() != n / 2)
            throw internal_error("majority groups failed to balance");
        return MajoritySplit{x, std::move(prefer_lr), std::move(prefer_rl)};
    }
    throw internal_error("no majority switching point among candidate cuts");
}

} // namespace mlcake
