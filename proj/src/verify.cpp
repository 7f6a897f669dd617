#include "mlcake/verify.hpp"

#include <algorithm>

#include "mlcake/cuts.hpp"

namespace mlcake {

ValueMatrix value_matrix(const Instance& inst, const MultiAllocation& alloc) {
    if (alloc.agents() != inst.n())
        throw validation_error("allocation agent count differs from instance");
    ValueMatrix m;
    m.entries.resize(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) {
        m.entries[i].reserve(inst.n());
        for (std::size_t j = 0; j < inst.n(); ++j)
            m.entries[i].push_back(value_of(inst.agents[i], alloc.pieces[j]));
    }
    return m;
}

bool FairnessReport::supports(Certificate c) const {
    if (!feasible || !complete) return false;
    switch (c) {
        case Certificate::Exact: return exact;
        case Certificate::EnvyFree: return envy_free && contiguous;
        case Certificate::Proportional: return proportional && contiguous;
    }
    return false;
}

FairnessReport fairness_report(const Instance& inst, const MultiAllocation& alloc) {
    const ValueMatrix m = value_matrix(inst, alloc);
    const std::size_t n = inst.n();
    FairnessReport report;
    report.proportional = report.envy_free = report.equitable = report.exact = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational share = inst.agents[i].total() / Rational(static_cast<long>(n));
        if (m.entries[i][i] < share) {
            report.proportional = false;
            report.proportional_witnesses.push_back(i);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (m.entries[i][i] < m.entries[i][j]) {
                report.envy_free = false;
                report.envy_witnesses.emplace_back(i, j);
            }
            if (j > i && m.entries[i][i] != m.entries[j][j]) {
                report.equitable = false;
                report.equitable_witnesses.emplace_back(i, j);
            }
            if (m.entries[i][j] != share) {
                report.exact = false;
                report.exact_witnesses.emplace_back(i, j);
            }
        }
    }
    report.feasible = report.contiguous = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_non_overlapping(alloc.pieces[i])) {
            report.feasible = false;
            report.feasibility_witnesses.push_back(i);
        }
        if (!is_contiguous(alloc.pieces[i])) {
            report.contiguous = false;
            report.contiguity_witnesses.push_back(i);
        }
    }
    report.complete = true;
    for (std::size_t l = 0; l < inst.m(); ++l) {
        Piece covered;
        Rational measure_sum = 0;
        for (const auto& piece : alloc.pieces) {
            covered = unite(covered, piece.per_layer[l]);
            measure_sum += piece.per_layer[l].measure();
        }
        const Interval& layer = inst.cake.layers[l];
        const bool tiles = layer.degenerate()
                               ? covered.empty()
                               : covered.intervals == std::vector<Interval>{layer} &&
                                     measure_sum == layer.length();
        if (!tiles) {
            report.complete = false;
            report.completeness_witnesses.push_back(l);
        }
    }
    return report;
}

namespace {

// Density value at a point, found by scanning cells from the right; the
// query layer walks left to right, so a shared indexing bug cannot hide.
Rational density_at(const std::vector<Rational>& bps, const std::vector<Rational>& vals,
                    const Rational& x) {
    for (std::size_t j = vals.size(); j-- > 0;)
        if (bps[j] <= x && x <= bps[j + 1]) return vals[j];
    return 0;
}

bool point_in_piece(const Piece& piece, const Rational& x) {
    for (const auto& iv : piece.intervals)
        if (iv.lo <= x && x <= iv.hi) return true;
    return false;
}

} // namespace

Rational riemann_oracle(const Instance& inst, std::size_t agent, const LayeredPiece& piece,
                        int resolution) {
    if (resolution < 1) throw validation_error("riemann oracle needs resolution >= 1");
    if (agent >= inst.n()) throw validation_error("agent index out of range");
    if (piece.layers() != inst.m()) throw validation_error("piece does not match cake");
    Rational total = 0;
    for (std::size_t l = 0; l < inst.m(); ++l) {
        const Interval& layer = inst.cake.layers[l];
        if (layer.degenerate()) continue;
        const auto& density = inst.agents[agent].densities[l];
        std::vector<Rational> grid;
        for (int k = 0; k <= resolution; ++k)
            grid.push_back(layer.lo + layer.length() * Rational(k, resolution));
        for (const auto& bp : density.breakpoints()) grid.push_back(bp);
        for (const auto& iv : piece.per_layer[l].intervals) {
            grid.push_back(max(iv.lo, layer.lo));
            grid.push_back(min(iv.hi, layer.hi));
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
            const Rational mid = midpoint(grid[g], grid[g + 1]);
            if (!point_in_piece(piece.per_layer[l], mid)) continue;
            total += density_at(density.breakpoints(), density.values(), mid) *
                     (grid[g + 1] - grid[g]);
        }
    }
    return total;
}

TwoKnifeSearch exhaustive_2x2_oracle(const Instance& inst, int grid) {
    if (inst.n() != 2 || inst.m() != 2)
        throw validation_error("two-knife oracle requires n=2 agents and m=2 layers");
    if (grid < 1 || grid > 64) throw validation_error("two-knife oracle grid must be in 1..64");
    std::array<Rational, 2> half;
    for (std::size_t i = 0; i < 2; ++i) half[i] = inst.agents[i].total() / 2;
    TwoKnifeSearch best;
    bool have = false;
    for (int i = 0; i <= grid; ++i) {
        for (int j = i; j <= grid; ++j) {
            const Rational x(i, grid);
            const Rational y(j, grid);
            const TwoKnifePieces knives = two_knife_cut(inst.cake, x, y);
            Rational deficiency = 0;
            for (std::size_t agent = 0; agent < 2; ++agent)
                deficiency += abs(riemann_oracle(inst, agent, knives.tlr, 1) - half[agent]);
            if (!have || deficiency < best.deficiency) {
                best = TwoKnifeSearch{deficiency, x, y};
                have = true;
            }
        }
    }
    return best;
}

} // namespace mlcake
