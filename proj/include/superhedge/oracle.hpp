/**
 * Brute-force checks that share no geometry with the set recursions:
 * superhedging written as one LP over the whole tree, the bid as a maximum
 * over enumerated stopping times, and exact verification of dual pairs.
 */
#ifndef SUPERHEDGE_ORACLE_HPP
#define SUPERHEDGE_ORACLE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "buyer.hpp"
#include "exercise.hpp"
#include "lp.hpp"
#include "market.hpp"
#include "seller.hpp"

namespace superhedge {

/**
 * Minimal x such that a self-financing strategy starting at node `from`
 * with holding y + x e^i satisfies y_t - xi_t in S_t at every exercise node
 * of the subtree. nullopt if infeasible; throws ArbitrageError if unbounded.
 *
 * Variables: x, then the portfolio chosen at each node of the subtree; only
 * nodes with exercise at or below them are constrained.
 * Solvency is imposed through the facets of each node's solvency cone.
 */
inline std::optional<Rational> superhedge_lp(const Model& m, std::size_t from, const Vec& y, std::size_t i)
{
    const auto& tree = m.tree;
    const std::size_t d = m.d(), N = tree.size();
    // Only nodes with an exercise node at or below them carry constraints.
    std::vector<bool> needed(N, false);
    for (std::size_t n = N; n-- > 0;) {
        needed[n] = needed[n] || m.exercise.allowed[n];
        if (needed[n] && n != tree.root())
            needed[tree.parent(n)] = true;
    }
    if (!needed[from])
        throw std::invalid_argument("no exercise at or below node '" + tree.id(from) + "'");
    std::vector<std::size_t> nodes{from}; // needed part of the subtree, BFS order
    std::vector<std::size_t> slot(N, N);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (auto c : tree.children(nodes[k]))
            if (needed[c])
                nodes.push_back(c);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        slot[nodes[k]] = k;

    auto zv = [&](std::size_t n, std::size_t j) { return 1 + slot[n] * d + j; };
    LinearProgram lp(1 + nodes.size() * d);
    for (std::size_t v = 0; v < 1 + nodes.size() * d; ++v)
        lp.set_free(v);
    lp.set_cost(0, 1);

    // a . (holding(n) + shift) >= offset, written over the variables.
    auto holding_row = [&](std::size_t n, const Vec& a, const Rational& offset, const Vec& shift) {
        std::vector<std::pair<std::size_t, Rational>> row;
        Rational rhs = offset - dot(a, shift);
        if (n == from) {
            rhs -= dot(a, y);
            if (!a[i].is_zero())
                row.push_back({0, a[i]});
        } else {
            for (std::size_t j = 0; j < d; ++j)
                if (!a[j].is_zero())
                    row.push_back({zv(tree.parent(n), j), a[j]});
        }
        return std::make_pair(row, rhs);
    };

    const Vec zero(d, Rational(0));
    for (auto n : nodes) {
        const auto facets = build_solvency_cone(m.pi.at(n)).cone.hrep();
        bool rebalances = false; // z_n matters only if a child is needed
        for (auto c : tree.children(n))
            rebalances = rebalances || needed[c];
        for (const auto& h : facets) {
            // holding - z_n in S
            if (rebalances) {
                auto [row, rhs] = holding_row(n, h.normal, h.offset, zero);
                for (std::size_t j = 0; j < d; ++j)
                    if (!h.normal[j].is_zero())
                        row.push_back({zv(n, j), -h.normal[j]});
                lp.add_sparse_constraint(row, Relation::GreaterEqual, rhs);
            }
            if (m.exercise.allowed[n]) {
                auto [erow, erhs] = holding_row(n, h.normal, h.offset, -m.xi[n]);
                lp.add_sparse_constraint(erow, Relation::GreaterEqual, erhs);
            }
        }
    }
    auto sol = lp.solve();
    if (sol.status == LPStatus::Infeasible)
        return std::nullopt;
    if (sol.status == LPStatus::Unbounded)
        throw ArbitrageError();
    return sol.value;
}

/// Ask price as a single LP over the tree.
inline Rational lp_ask(const Model& m, std::size_t i)
{
    validate_model(m);
    auto v = superhedge_lp(m, m.tree.root(), Vec(m.d(), Rational(0)), i);
    if (!v)
        throw std::logic_error("superhedging LP infeasible");
    return *v;
}

/// Whether holding y at node n superhedges the seller's position in the subtree.
inline bool seller_superhedgeable(const Model& m, std::size_t n, const Vec& y)
{
    auto star = future_exercise(m.tree, m.exercise);
    if (!star[n])
        return true; // nothing left to deliver
    auto v = superhedge_lp(m, n, y, 0);
    return v && *v <= 0;
}

struct BidResult
{
    Rational value;
    StoppingTime tau;
};

/// Bid as the maximum over consistent stopping times of minus the ask of the
/// short claim stopped there. Ties go to the first stopping time enumerated.
inline BidResult lp_bid(const Model& m, std::size_t i, std::size_t cap = 1000000)
{
    validate_model(m);
    std::optional<BidResult> best;
    for (const auto& tau : enumerate_stopping_times(m.tree, m.exercise, cap)) {
        Rational v = -lp_ask(stopped_short_claim(m, tau), i);
        if (!best || v > best->value)
            best = BidResult{v, tau};
    }
    if (!best)
        throw std::logic_error("no consistent stopping time");
    return *best;
}

/// Whether holding y at the root lets the buyer exercise at some consistent
/// stopping time and remain solvent.
inline bool buyer_superhedgeable(const Model& m, const Vec& y, std::size_t cap = 1000000)
{
    for (const auto& tau : enumerate_stopping_times(m.tree, m.exercise, cap)) {
        auto v = superhedge_lp(stopped_short_claim(m, tau), m.tree.root(), y, 0);
        if (v && *v <= 0)
            return true;
    }
    return false;
}

/**
 * Exact check that (P, S) is a chi-approximate martingale pair: transition
 * probabilities form a distribution at every node, S_t is a nonzero element
 * of the dual cone, and E(sum_{s>t} chi_s S_s | F_t) lies in the dual cone.
 * With `i`, also S^i = 1; with `strict`, every transition is positive.
 */
inline bool verify_pair(const EventTree& tree, const ExchangeProcess& pi, const MartingalePair& pair,
                        const RandomisedStoppingTime& chi, std::optional<std::size_t> i = std::nullopt,
                        bool strict = false)
{
    const std::size_t N = tree.size(), d = pi.d;
    if (pair.prob.size() != N || pair.S.size() != N || chi.chi.size() != N)
        return false;
    if (pair.prob[tree.root()] != 1)
        return false;
    auto in_dual = [&](std::size_t n, const Vec& s) {
        for (const auto& g : solvency_generators(pi.at(n)))
            if (dot(g, s) < 0)
                return false;
        return true;
    };
    std::vector<Vec> tail(N, Vec(d, Rational(0))); // chi_n S_n + E(tail of children)
    for (std::size_t n = N; n-- > 0;) {
        if (pair.S[n].size() != d || pair.prob[n] < 0 || (strict && pair.prob[n].is_zero()))
            return false;
        if (is_zero(pair.S[n]) || !in_dual(n, pair.S[n]))
            return false;
        if (i && pair.S[n][*i] != 1)
            return false;
        Vec ahead(d, Rational(0));
        if (!tree.is_leaf(n)) {
            Rational total = 0;
            for (auto c : tree.children(n)) {
                total += pair.prob[c];
                ahead = ahead + pair.prob[c] * tail[c];
            }
            if (total != 1 || !in_dual(n, ahead))
                return false;
        }
        tail[n] = chi.chi[n] * pair.S[n] + ahead;
    }
    return true;
}

/**
 * Turns a pair with possibly null branches into an equivalent one whose value
 * at chi is within delta of the original: mix with the seed (an equivalent
 * martingale pair) as (1 - eps) Pbar + eps P, weighting the price processes
 * by the corresponding likelihood ratios. A pair that is already equivalent
 * is returned unchanged.
 */
inline MartingalePair perturb_pair(const EventTree& tree, const MartingalePair& bar,
                                   const RandomisedStoppingTime& chi, const PayoffProcess& xi,
                                   const Rational& delta, const MartingalePair& seed)
{
    if (delta <= 0)
        throw std::invalid_argument("delta must be positive");
    bool positive = true;
    for (const auto& p : bar.prob)
        positive = positive && p > 0;
    if (positive)
        return bar;
    const Rational diff = expectation(tree, seed, xi, chi) - expectation(tree, bar, xi, chi);
    if (diff.is_zero())
        return seed;
    const Rational absdiff = diff < 0 ? Rational(-diff) : diff;
    const Rational half = delta / 2;
    const Rational eps = half >= absdiff ? Rational(1) : Rational(half / absdiff);

    const auto qb = bar.absolute(tree), qs = seed.absolute(tree);
    const std::size_t N = tree.size();
    std::vector<Rational> q(N);
    MartingalePair out;
    out.prob.resize(N);
    out.S.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        q[n] = (1 - eps) * qb[n] + eps * qs[n];
        out.S[n] = (1 / q[n]) * ((1 - eps) * qb[n] * bar.S[n] + eps * qs[n] * seed.S[n]);
        out.prob[n] = n == tree.root() ? Rational(1) : Rational(q[n] / q[tree.parent(n)]);
    }
    return out;
}

} // namespace superhedge

#endif // SUPERHEDGE_ORACLE_HPP
