#include "mlcake/protocols.hpp"

#include <algorithm>
#include <optional>

namespace mlcake {

namespace {

LayeredPiece whole_cake_piece(const LayeredCake& cake) {
    LayeredPiece piece(cake.m());
    for (std::size_t l = 0; l < cake.m(); ++l)
        piece.per_layer[l] = normalize_piece({cake.layers[l]});
    return piece;
}

void check_lifted(const std::vector<LayeredPiece>& pieces) {
    for (const auto& p : pieces)
        if (!is_contiguous(p) || !is_non_overlapping(p))
            throw internal_error("lift broke contiguity or non-overlap");
}

void check_result(const LayeredCake& cake, const std::vector<LayeredPiece>& pieces,
                  bool claim_contiguous) {
    MultiAllocation alloc{cake, pieces};
    if (!is_exact_partition(alloc)) throw internal_error("allocation does not tile the cake");
    for (const auto& p : pieces) {
        if (!is_non_overlapping(p)) throw internal_error("allocation piece overlaps itself");
        if (claim_contiguous && !is_contiguous(p))
            throw internal_error("allocation piece is not contiguous");
    }
}

using Ids = std::vector<std::size_t>;

std::vector<LayeredPiece> solve_rec(const LayeredCake& cake, const std::vector<Valuation>& vals,
                                    const Ids& ids, QuerySession& session);

// ---- trimming -------------------------------------------------------------

struct TrimCore {
    std::size_t recipient_pos;
    std::size_t layer;
    Rational mark;
    LayeredPiece piece;
    LayeredCake rem_cake;
    std::vector<Valuation> rem_vals;
    Ids rem_ids;
};

TrimCore trim_core(const LayeredCake& cake, const std::vector<Valuation>& vals, const Ids& ids,
                   QuerySession& session) {
    const std::size_t n = vals.size();
    const Rational share_den(static_cast<long>(n));

    std::vector<std::vector<bool>> marks(n, std::vector<bool>(cake.m(), false));
    std::vector<std::size_t> markers_per_layer(cake.m(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const Rational share = vals[i].total() / share_den;
        for (std::size_t l = 0; l < cake.m(); ++l) {
            session.note_short_eval(ids[i]);
            if (vals[i].densities[l].total() >= share) {
                marks[i][l] = true;
                ++markers_per_layer[l];
            }
        }
    }
    std::size_t layer = 0;
    for (std::size_t l = 1; l < cake.m(); ++l)
        if (markers_per_layer[l] > markers_per_layer[layer]) layer = l;
    if (markers_per_layer[layer] == 0)
        throw internal_error("trim found no markable layer");

    std::optional<std::size_t> recipient;
    Rational best_mark;
    for (std::size_t i = 0; i < n; ++i) {
        if (!marks[i][layer]) continue;
        const Rational y =
            session.cut_short(ids[i], vals[i], layer, cake.layers[layer].lo,
                              vals[i].total() / share_den);
        if (!recipient || y < best_mark) {
            recipient = i;
            best_mark = y;
        }
    }

    TrimCore out;
    out.recipient_pos = *recipient;
    out.layer = layer;
    out.mark = best_mark;
    out.piece = LayeredPiece(cake.m());
    out.piece.per_layer[layer] =
        normalize_piece({Interval(cake.layers[layer].lo, best_mark)});
    out.rem_cake = cake;
    out.rem_cake.layers[layer] = Interval(best_mark, cake.layers[layer].hi);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == *recipient) continue;
        out.rem_vals.push_back(restrict_valuation(vals[i], out.rem_cake));
        out.rem_ids.push_back(ids[i]);
    }
    return out;
}

// ---- 2-agent base case ----------------------------------------------------

std::pair<LayeredPiece, LayeredPiece> cut_and_choose_core(const LayeredCake& cake,
                                                          const Valuation& v0,
                                                          const Valuation& v1, std::size_t id0,
                                                          std::size_t id1,
                                                          QuerySession& session) {
    const Rational x = switching_point(v0, cake, &session, id0);
    DiagonalCut cut = diagonal_cut(cake, x);
    const Rational lr = session.value(id1, v1, cut.lr);
    const Rational rl = session.value(id1, v1, cut.rl);
    if (lr >= rl) return {std::move(cut.rl), std::move(cut.lr)};
    return {std::move(cut.lr), std::move(cut.rl)};
}

// ---- n = m = 3 ------------------------------------------------------------

std::array<LayeredPiece, 3> prop3x3_core(const LayeredCake& cake,
                                         const std::vector<Valuation>& vals, const Ids& ids,
                                         QuerySession& session) {
    std::array<Rational, 3> totals;
    std::array<std::array<Rational, 3>, 3> layer_value;
    for (std::size_t i = 0; i < 3; ++i) {
        totals[i] = vals[i].total();
        for (std::size_t l = 0; l < 3; ++l) {
            session.note_short_eval(ids[i]);
            layer_value[i][l] = vals[i].densities[l].total();
        }
    }

    // Unordered layer pairs in fixed order; an agent is satisfied when one
    // layer of the pair is worth at least a third of its total and the other
    // at most. Every agent satisfies some pair, so the best count is >= 1.
    constexpr std::array<std::array<std::size_t, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::size_t best_pair = 0;
    std::size_t best_count = 0;
    std::array<std::optional<std::size_t>, 3> first_satisfier;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            const Rational third = totals[i] / 3;
            const Rational& va = layer_value[i][pairs[pi][0]];
            const Rational& vb = layer_value[i][pairs[pi][1]];
            if (min(va, vb) <= third && third <= max(va, vb)) {
                ++count;
                if (!first_satisfier[pi]) first_satisfier[pi] = i;
            }
        }
        if (count > best_count) {
            best_count = count;
            best_pair = pi;
        }
    }
    if (best_count == 0) throw internal_error("no acceptable layer pair for any agent");
    const std::size_t cutter = *first_satisfier[best_pair];
    const Rational third = totals[cutter] / 3;
    std::size_t p = pairs[best_pair][0];
    std::size_t q = pairs[best_pair][1];
    if (!(layer_value[cutter][p] >= third && third >= layer_value[cutter][q])) std::swap(p, q);
    const std::size_t t = 3 - p - q;

    // First cut: prefix of L_p plus suffix of L_q worth exactly a third.
    const LayeredCake pair_cake{{cake.layers[p], cake.layers[q]}};
    const Valuation cutter_pair{{vals[cutter].densities[p], vals[cutter].densities[q]}};
    const Rational y = session.cut_long(ids[cutter], cutter_pair, pair_cake, third);

    std::array<LayeredPiece, 3> pieces{LayeredPiece(3), LayeredPiece(3), LayeredPiece(3)};
    pieces[0].per_layer[p] = intersect(normalize_piece({cake.layers[p]}), Interval(0, y));
    pieces[0].per_layer[q] = intersect(normalize_piece({cake.layers[q]}), Interval(y, 1));

    // Rest of the pair seam-joined at y, third layer untouched.
    std::vector<Segment> chain0;
    {
        Interval part;
        if (try_intersect(cake.layers[q], Interval(0, y), part) && !part.degenerate())
            chain0.push_back({q, part});
        if (try_intersect(cake.layers[p], Interval(y, 1), part) && !part.degenerate())
            chain0.push_back({p, part});
    }
    std::vector<Segment> chain1;
    if (!cake.layers[t].degenerate()) chain1.push_back({t, cake.layers[t]});
    const MergedCake rest = merged_from_chains({chain0, chain1});

    const Valuation cutter_rest = transport(vals[cutter], rest);
    const Rational z = switching_point(cutter_rest, rest.cake, &session, ids[cutter]);
    DiagonalCut rest_cut = diagonal_cut(rest.cake, z);
    pieces[1] = lift_piece(rest, rest_cut.lr, 3);
    pieces[2] = lift_piece(rest, rest_cut.rl, 3);
    check_lifted({pieces[1], pieces[2]});

    const std::array<std::size_t, 2> others = cutter == 0   ? std::array<std::size_t, 2>{1, 2}
                                              : cutter == 1 ? std::array<std::size_t, 2>{0, 2}
                                                            : std::array<std::size_t, 2>{0, 1};
    std::array<std::array<bool, 3>, 2> acceptable{};
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 3; ++j)
            acceptable[k][j] = session.value(ids[others[k]], vals[others[k]], pieces[j]) >=
                               totals[others[k]] / 3;

    std::array<LayeredPiece, 3> out;
    for (std::size_t j2 = 0; j2 < 3; ++j2) {
        for (std::size_t j3 = 0; j3 < 3; ++j3) {
            if (j2 == j3 || !acceptable[0][j2] || !acceptable[1][j3]) continue;
            out[others[0]] = pieces[j2];
            out[others[1]] = pieces[j3];
            out[cutter] = pieces[3 - j2 - j3];
            return out;
        }
    }

    // Both non-cutters accept only one common piece r. The cutter takes a
    // piece they both rejected, chosen so the rest splits into two seam
    // chains with every layer contributing one segment; the non-cutters
    // then divide the rest between themselves.
    std::size_t r = 0;
    while (r < 3 && !acceptable[0][r]) ++r;
    if (r == 3 || !acceptable[1][r])
        throw internal_error("non-cutters have no common acceptable piece");
    const std::size_t cutter_takes = r != 0 ? 0 : (z <= y ? 1 : 2);

    std::array<std::size_t, 2> rest_idx{};
    for (std::size_t j = 0, k = 0; j < 3; ++j)
        if (j != cutter_takes) rest_idx[k++] = j;
    std::vector<Segment> segments;
    for (std::size_t l = 0; l < 3; ++l) {
        const Piece merged =
            unite(pieces[rest_idx[0]].per_layer[l], pieces[rest_idx[1]].per_layer[l]);
        if (merged.empty()) continue;
        if (merged.intervals.size() != 1)
            throw internal_error("contested remainder is not one interval per layer");
        segments.push_back({l, merged.intervals[0]});
    }
    std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
        return a.iv.lo < b.iv.lo || (a.iv.lo == b.iv.lo && a.orig_layer < b.orig_layer);
    });
    std::vector<std::vector<Segment>> chains;
    std::vector<Rational> chain_end;
    for (const auto& seg : segments) {
        bool placed = false;
        for (std::size_t c = 0; c < chains.size() && !placed; ++c) {
            if (chain_end[c] <= seg.iv.lo) {
                chains[c].push_back(seg);
                chain_end[c] = seg.iv.hi;
                placed = true;
            }
        }
        if (!placed) {
            if (chains.size() == 2)
                throw internal_error("contested remainder needs more than two chains");
            chains.push_back({seg});
            chain_end.push_back(seg.iv.hi);
        }
    }
    const MergedCake rest2 = merged_from_chains(std::move(chains));

    const Valuation nc0 = transport(vals[others[0]], rest2);
    const Valuation nc1 = transport(vals[others[1]], rest2);
    auto [piece_nc0, piece_nc1] =
        cut_and_choose_core(rest2.cake, nc0, nc1, ids[others[0]], ids[others[1]], session);
    std::vector<LayeredPiece> lifted = lift_allocation(rest2, {piece_nc0, piece_nc1}, 3);
    check_lifted(lifted);

    out[cutter] = pieces[cutter_takes];
    out[others[0]] = std::move(lifted[0]);
    out[others[1]] = std::move(lifted[1]);
    return out;
}

// ---- even split at a majority switching point ------------------------------

std::vector<LayeredPiece> split_and_recurse(const LayeredCake& cake,
                                            const std::vector<Valuation>& vals, const Ids& ids,
                                            QuerySession& session, const MajoritySplit& split,
                                            const MergedCake& lr_merge,
                                            const MergedCake& rl_merge) {
    std::vector<LayeredPiece> out(vals.size());
    for (const auto* group : {&split.group_lr, &split.group_rl}) {
        const MergedCake& merged = group == &split.group_lr ? lr_merge : rl_merge;
        std::vector<Valuation> sub_vals;
        Ids sub_ids;
        for (const std::size_t pos : *group) {
            sub_vals.push_back(transport(vals[pos], merged));
            sub_ids.push_back(ids[pos]);
        }
        const std::vector<LayeredPiece> sub =
            solve_rec(merged.cake, sub_vals, sub_ids, session);
        std::vector<LayeredPiece> lifted = lift_allocation(merged, sub, cake.m());
        check_lifted(lifted);
        for (std::size_t k = 0; k < group->size(); ++k)
            out[(*group)[k]] = std::move(lifted[k]);
    }
    return out;
}

std::vector<LayeredPiece> even_split_core(const LayeredCake& cake,
                                          const std::vector<Valuation>& vals, const Ids& ids,
                                          QuerySession& session) {
    const MajoritySplit split = majority_switching_point(vals, cake, &session, &ids);
    return split_and_recurse(cake, vals, ids, session, split,
                             merge_even(cake, split.x, Side::LR),
                             merge_even(cake, split.x, Side::RL));
}

// ---- 3 layers, any n >= 3 ---------------------------------------------------

std::vector<LayeredPiece> prop3n_core(const LayeredCake& cake,
                                      const std::vector<Valuation>& vals, const Ids& ids,
                                      QuerySession& session) {
    const std::size_t n = vals.size();
    if (n == 3) {
        const auto three = prop3x3_core(cake, vals, ids, session);
        return {three[0], three[1], three[2]};
    }
    if (n % 2 == 1) {
        const TrimCore trim = trim_core(cake, vals, ids, session);
        std::vector<LayeredPiece> rest =
            prop3n_core(trim.rem_cake, trim.rem_vals, trim.rem_ids, session);
        std::vector<LayeredPiece> out;
        out.reserve(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(i == trim.recipient_pos ? trim.piece : std::move(rest[k++]));
        return out;
    }
    // Even n: the two top layers act as one layer (the odd diagonal cut does
    // exactly that), then each half of the agents gets one merged 2-layer cake.
    const MajoritySplit split = majority_switching_point(vals, cake, &session, &ids);
    return split_and_recurse(cake, vals, ids, session, split,
                             merge_odd(cake, split.x, Side::LR),
                             merge_odd(cake, split.x, Side::RL));
}

// ---- recursive dispatcher ---------------------------------------------------

std::vector<LayeredPiece> solve_rec(const LayeredCake& cake, const std::vector<Valuation>& vals,
                                    const Ids& ids, QuerySession& session) {
    const std::size_t n = vals.size();
    const std::size_t m = cake.m();
    if (n == 0) throw internal_error("subproblem without agents");
    if (n == 1) return {whole_cake_piece(cake)};
    if (n > m) {
        const TrimCore trim = trim_core(cake, vals, ids, session);
        std::vector<LayeredPiece> rest =
            solve_rec(trim.rem_cake, trim.rem_vals, trim.rem_ids, session);
        std::vector<LayeredPiece> out;
        out.reserve(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(i == trim.recipient_pos ? trim.piece : std::move(rest[k++]));
        return out;
    }
    // n == m
    if (m == 2) {
        auto [p0, p1] = cut_and_choose_core(cake, vals[0], vals[1], ids[0], ids[1], session);
        return {std::move(p0), std::move(p1)};
    }
    if (m == 3) {
        const auto three = prop3x3_core(cake, vals, ids, session);
        return {three[0], three[1], three[2]};
    }
    if (m % 2 == 0) return even_split_core(cake, vals, ids, session);
    throw unsupported_shape_error("no base protocol for " + std::to_string(m) + " layers");
}

Ids identity_ids(std::size_t n) {
    Ids ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

std::vector<Valuation> agent_valuations(const Instance& inst) { return inst.agents; }

ProtocolResult finish(const Instance& inst, std::vector<LayeredPiece> pieces,
                      QuerySession session, Certificate cert, bool claim_contiguous) {
    check_result(inst.cake, pieces, claim_contiguous);
    ProtocolResult result;
    result.allocation = MultiAllocation{inst.cake, std::move(pieces)};
    result.transcript = session.counts();
    result.certificate = cert;
    return result;
}

// ---- exact 2x2 --------------------------------------------------------------

// Clips [lo, hi] with the inequality coef*u <= bound; false when empty.
bool clip_upper(Rational& lo, Rational& hi, const Rational& coef, const Rational& bound) {
    if (coef.sign() > 0) {
        const Rational limit = bound / coef;
        if (limit < hi) hi = limit;
    } else if (coef.sign() < 0) {
        const Rational limit = bound / coef;
        if (lo < limit) lo = limit;
    } else if (bound.sign() < 0) {
        return false;
    }
    return lo <= hi;
}

struct KnifeCandidate {
    Rational x;
    Rational y;
};

bool lex_less(const KnifeCandidate& a, const KnifeCandidate& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Lexicographically least solution of the 2x2 linear system inside one grid
// cell [a,b] x [c,d], intersected with x <= y. The system may degenerate to a
// line or the whole cell when constraints are flat there.
std::optional<KnifeCandidate> solve_cell(const Rational& a, const Rational& b, const Rational& c,
                                         const Rational& d, std::array<Rational, 2> alpha,
                                         std::array<Rational, 2> beta,
                                         std::array<Rational, 2> rhs) {
    const Rational cap_u = b - a;
    const Rational cap_w = d - c;
    const Rational det = alpha[0] * beta[1] - alpha[1] * beta[0];
    if (!det.is_zero()) {
        const Rational u = (rhs[0] * beta[1] - rhs[1] * beta[0]) / det;
        const Rational w = (alpha[0] * rhs[1] - alpha[1] * rhs[0]) / det;
        if (u < Rational(0) || cap_u < u || w < Rational(0) || cap_w < w) return std::nullopt;
        if (c + w < a + u) return std::nullopt;
        return KnifeCandidate{a + u, c + w};
    }
    // Parallel constraints: keep one representative if consistent.
    std::optional<std::size_t> line;
    for (std::size_t i = 0; i < 2; ++i) {
        if (alpha[i].is_zero() && beta[i].is_zero()) {
            if (!rhs[i].is_zero()) return std::nullopt;
        } else {
            line = i;
        }
    }
    if (line && !(alpha[0].is_zero() && beta[0].is_zero()) &&
        !(alpha[1].is_zero() && beta[1].is_zero())) {
        if (alpha[0] * rhs[1] != alpha[1] * rhs[0] || beta[0] * rhs[1] != beta[1] * rhs[0])
            return std::nullopt;
        line = 0;
    }
    if (!line) {
        // Every pair in the cell satisfies both constraints.
        if (d < a) return std::nullopt;
        return KnifeCandidate{a, max(c, a)};
    }
    const Rational& al = alpha[*line];
    const Rational& be = beta[*line];
    const Rational& r = rhs[*line];
    if (be.is_zero()) {
        const Rational u = r / al;
        if (u < Rational(0) || cap_u < u) return std::nullopt;
        const Rational x = a + u;
        const Rational w_min = max(Rational(0), x - c);
        if (cap_w < w_min) return std::nullopt;
        return KnifeCandidate{x, c + w_min};
    }
    // Parametrize by u; w(u) = (r - al*u)/be, then clip by 0<=w<=W and x<=y.
    Rational lo = 0;
    Rational hi = cap_u;
    if (be.sign() > 0) {
        if (!clip_upper(lo, hi, al, r)) return std::nullopt;                   // w >= 0
        if (!clip_upper(lo, hi, -al, cap_w * be - r)) return std::nullopt;     // w <= W
        if (!clip_upper(lo, hi, be + al, be * (c - a) + r)) return std::nullopt; // x <= y
    } else {
        if (!clip_upper(lo, hi, -al, -r)) return std::nullopt;
        if (!clip_upper(lo, hi, al, r - cap_w * be)) return std::nullopt;
        if (!clip_upper(lo, hi, -(be + al), -(be * (c - a) + r))) return std::nullopt;
    }
    if (hi < lo) return std::nullopt;
    const Rational w = (r - al * lo) / be;
    return KnifeCandidate{a + lo, c + w};
}

} // namespace

std::string certificate_name(Certificate c) {
    switch (c) {
        case Certificate::Exact: return "exact";
        case Certificate::EnvyFree: return "envy-free";
        case Certificate::Proportional: return "proportional";
    }
    throw internal_error("unknown certificate");
}

ProtocolResult cut_and_choose_2(const Instance& inst) {
    validate_instance(inst);
    if (inst.n() != 2 || inst.m() != 2)
        throw validation_error("cutchoose2 requires n=2 agents and m=2 layers");
    QuerySession session(2);
    auto [p0, p1] = cut_and_choose_core(inst.cake, inst.agents[0], inst.agents[1], 0, 1, session);
    return finish(inst, {std::move(p0), std::move(p1)}, std::move(session),
                  Certificate::Proportional, true);
}

ProtocolResult exact_2x2(const Instance& inst) {
    validate_instance(inst);
    if (inst.n() != 2 || inst.m() != 2)
        throw validation_error("exact2x2 requires n=2 agents and m=2 layers");
    QuerySession session(2);

    std::vector<Rational> grid{0, 1};
    for (const auto& agent : inst.agents)
        for (const auto& d : agent.densities)
            for (const auto& bp : d.breakpoints()) grid.push_back(bp);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // V_i(TLR(x,y)) = A_i(x) + B_i(y) with
    //   A_i(x) = V_i1(L1 cap [0,x]) - V_i2(L2 cap [0,x])
    //   B_i(y) = V_i2(L2 cap [0,y]) + V_i1(L1 cap [y,1])
    const auto prefix = [](const StepDensity& d, const Rational& x) {
        const Rational clamped = min(max(x, d.span().lo), d.span().hi);
        return d.eval(d.span().lo, clamped);
    };
    std::array<std::vector<Rational>, 2> A, B;
    std::array<Rational, 2> half;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& top = inst.agents[i].densities[0];
        const auto& bottom = inst.agents[i].densities[1];
        half[i] = inst.agents[i].total() / 2;
        A[i].reserve(grid.size());
        B[i].reserve(grid.size());
        for (const auto& g : grid) {
            session.note_long_eval(i);
            const Rational p_top = prefix(top, g);
            const Rational p_bottom = prefix(bottom, g);
            A[i].push_back(p_top - p_bottom);
            B[i].push_back(p_bottom + top.total() - p_top);
        }
    }

    std::optional<KnifeCandidate> best;
    for (std::size_t gi = 0; gi + 1 < grid.size(); ++gi) {
        const Rational du = grid[gi + 1] - grid[gi];
        for (std::size_t gj = 0; gj + 1 < grid.size(); ++gj) {
            if (grid[gj + 1] < grid[gi]) continue; // whole cell violates x <= y
            const Rational dw = grid[gj + 1] - grid[gj];
            std::array<Rational, 2> alpha, beta, rhs;
            for (std::size_t i = 0; i < 2; ++i) {
                alpha[i] = (A[i][gi + 1] - A[i][gi]) / du;
                beta[i] = (B[i][gj + 1] - B[i][gj]) / dw;
                rhs[i] = half[i] - A[i][gi] - B[i][gj];
            }
            const auto cand =
                solve_cell(grid[gi], grid[gi + 1], grid[gj], grid[gj + 1], alpha, beta, rhs);
            if (cand && (!best || lex_less(*cand, *best))) best = cand;
        }
    }
    if (!best) throw internal_error("no exact knife pair exists on the constraint curve");

    TwoKnifePieces knives = two_knife_cut(inst.cake, best->x, best->y);
    for (std::size_t i = 0; i < 2; ++i)
        if (value_of(inst.agents[i], knives.tlr) != half[i])
            throw internal_error("exact division check failed");
    return finish(inst, {std::move(knives.tlr), std::move(knives.trl)}, std::move(session),
                  Certificate::Exact, false);
}

namespace {

std::array<LayeredPiece, 3> ef3x2_core(const LayeredCake& cake, const Valuation& shared,
                                       const Valuation& chooser, QuerySession& session,
                                       const Ids& ids) {
    const Rational total = shared.total();
    const Rational third = total / 3;
    const Rational x = switching_point(shared, cake, &session, ids[0]);

    const Interval& top = cake.layers[0];
    const Interval& bottom = cake.layers[1];
    const auto clamp = [](const Rational& v, const Interval& iv) {
        return min(max(v, iv.lo), iv.hi);
    };

    // Prefix of the top layer worth 2/3 of the value left of the switching
    // point, suffix of the bottom layer completing the first third.
    const Rational a = session.eval_short(ids[0], shared, 0, top.lo, clamp(x, top));
    const Rational y = session.cut_short(ids[0], shared, 0, top.lo, a * Rational(2, 3));
    const Rational bottom_total = shared.densities[1].total();
    const Rational z_prefix_target = bottom_total - (third - a * Rational(2, 3));
    Rational z = session.cut_short(ids[0], shared, 1, bottom.lo, z_prefix_target);
    z = max(z, min(x, bottom.hi)); // stay right of the switching point on plateaus

    std::array<LayeredPiece, 3> pieces{LayeredPiece(2), LayeredPiece(2), LayeredPiece(2)};
    pieces[0].per_layer[0] = intersect(normalize_piece({top}), Interval(0, y));
    pieces[0].per_layer[1] = intersect(normalize_piece({bottom}), Interval(z, 1));

    std::vector<Segment> chain0, chain1;
    {
        Interval part;
        if (try_intersect(top, Interval(y, 1), part) && !part.degenerate())
            chain0.push_back({0, part});
        if (try_intersect(bottom, Interval(0, z), part) && !part.degenerate())
            chain1.push_back({1, part});
    }
    const MergedCake rest = merged_from_chains({chain0, chain1});
    const Valuation shared_rest = transport(shared, rest);
    const Rational c = switching_point(shared_rest, rest.cake, &session, ids[0]);
    DiagonalCut cut = diagonal_cut(rest.cake, c);
    pieces[1] = lift_piece(rest, cut.lr, 2);
    pieces[2] = lift_piece(rest, cut.rl, 2);
    check_lifted({pieces[1], pieces[2]});

    std::size_t pick = 0;
    Rational pick_value = session.value(ids[2], chooser, pieces[0]);
    for (std::size_t j = 1; j < 3; ++j) {
        const Rational v = session.value(ids[2], chooser, pieces[j]);
        if (v > pick_value) {
            pick = j;
            pick_value = v;
        }
    }
    std::array<LayeredPiece, 3> out;
    out[2] = pieces[pick];
    std::size_t slot = 0;
    for (std::size_t j = 0; j < 3; ++j)
        if (j != pick) out[slot++] = pieces[j];
    return out; // [sharer p, sharer q, chooser]
}

} // namespace

ProtocolResult envy_free_3x2(const LayeredCake& cake2, const Valuation& shared,
                             const Valuation& chooser) {
    if (cake2.m() != 2) throw validation_error("ef3x2 requires a 2-layer cake");
    Instance inst{cake2, {shared, shared, chooser}};
    validate_instance(inst);
    QuerySession session(3);
    auto pieces = ef3x2_core(cake2, shared, chooser, session, identity_ids(3));
    return finish(inst, {pieces[0], pieces[1], pieces[2]}, std::move(session),
                  Certificate::EnvyFree, true);
}

ProtocolResult envy_free_3x2(const Instance& inst) {
    validate_instance(inst);
    if (inst.n() != 3 || inst.m() != 2)
        throw validation_error("ef3x2 requires n=3 agents and m=2 layers");
    const auto same = [&](std::size_t i, std::size_t j) {
        for (std::size_t l = 0; l < 2; ++l)
            if (!inst.agents[i].densities[l].same_function(inst.agents[j].densities[l]))
                return false;
        return true;
    };
    std::size_t p, q, r;
    if (same(0, 1)) { p = 0; q = 1; r = 2; }
    else if (same(0, 2)) { p = 0; q = 2; r = 1; }
    else if (same(1, 2)) { p = 1; q = 2; r = 0; }
    else throw validation_error("ef3x2 requires two agents with identical valuations");

    QuerySession session(3);
    const auto pieces =
        ef3x2_core(inst.cake, inst.agents[p], inst.agents[r], session, Ids{p, q, r});
    std::vector<LayeredPiece> by_agent(3);
    by_agent[p] = pieces[0];
    by_agent[q] = pieces[1];
    by_agent[r] = pieces[2];
    return finish(inst, std::move(by_agent), std::move(session), Certificate::EnvyFree, true);
}

ProtocolResult proportional_3x3(const Instance& inst) {
    validate_instance(inst);
    if (inst.n() != 3 || inst.m() != 3)
        throw validation_error("prop3x3 requires n=3 agents and m=3 layers");
    QuerySession session(3);
    const auto pieces = prop3x3_core(inst.cake, agent_valuations(inst), identity_ids(3), session);
    return finish(inst, {pieces[0], pieces[1], pieces[2]}, std::move(session),
                  Certificate::Proportional, true);
}

ProtocolResult proportional_3layer_n(const Instance& inst) {
    validate_instance(inst);
    if (inst.m() != 3 || inst.n() < 3)
        throw validation_error("prop3n requires m=3 layers and n>=3 agents");
    QuerySession session(inst.n());
    auto pieces = prop3n_core(inst.cake, agent_valuations(inst), identity_ids(inst.n()), session);
    return finish(inst, std::move(pieces), std::move(session), Certificate::Proportional, true);
}

bool supported_shape(std::size_t m) {
    if (m == 0) return false;
    while (m % 2 == 0) m /= 2;
    return m == 1 || m == 3;
}

ProtocolResult proportional_recursive(const Instance& inst) {
    validate_instance(inst);
    if (!supported_shape(inst.m()))
        throw unsupported_shape_error("unsupported layer count " + std::to_string(inst.m()) +
                                      ": need m = 2^a * 3^b with b <= 1");
    if (inst.n() < inst.m())
        throw validation_error("no complete feasible multi-allocation exists for n < m");
    QuerySession session(inst.n());
    auto pieces = solve_rec(inst.cake, agent_valuations(inst), identity_ids(inst.n()), session);
    return finish(inst, std::move(pieces), std::move(session), Certificate::Proportional, true);
}

TrimStep trim_step(const Instance& inst) {
    validate_instance(inst);
    if (inst.n() < 2) throw validation_error("trimming needs at least two agents");
    QuerySession session(inst.n());
    TrimCore core = trim_core(inst.cake, agent_valuations(inst), identity_ids(inst.n()), session);
    TrimStep out;
    out.recipient = core.recipient_pos;
    out.layer = core.layer;
    out.mark = core.mark;
    out.piece = std::move(core.piece);
    out.remainder = Instance{std::move(core.rem_cake), std::move(core.rem_vals)};
    return out;
}

ProtocolResult run_protocol(const std::string& id, const Instance& inst) {
    if (id == "cutchoose2") return cut_and_choose_2(inst);
    if (id == "exact2x2") return exact_2x2(inst);
    if (id == "ef3x2") return envy_free_3x2(inst);
    if (id == "prop3x3") return proportional_3x3(inst);
    if (id == "prop3n") return proportional_3layer_n(inst);
    if (id == "prop") return proportional_recursive(inst);
    throw validation_error("unknown protocol id: " + id);
}

} // namespace mlcake
