/**
 * Buyer's side. The sets are finite unions of polyhedra because the buyer
 * chooses the exercise time, which makes the problem non-convex:
 *   U = -xi + S where exercise is allowed, empty elsewhere;
 *   W = intersection over successors of Z (distributed over pieces),
 *   V = W + S, while exercise remains possible after the node (empty otherwise);
 *   Z = U ∪ V.
 */
#ifndef SUPERHEDGE_BUYER_HPP
#define SUPERHEDGE_BUYER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "exercise.hpp"
#include "market.hpp"
#include "polyhedron.hpp"
#include "seller.hpp"

namespace superhedge {

struct BuyerSets
{
    std::vector<SolvencyCone> cones;
    std::vector<bool> after;
    std::vector<std::optional<Polyhedron>> U;
    std::vector<PolyUnion> V, W, Z;
};

inline BuyerSets build_buyer_sets(const Model& m, std::size_t piece_cap = 100000)
{
    validate_model(m);
    const auto& tree = m.tree;
    const std::size_t d = m.d(), N = tree.size();
    BuyerSets b;
    b.cones = build_solvency_cones(m.pi);
    b.after = exercise_after(tree, m.exercise);
    b.U.resize(N);
    b.V.assign(N, PolyUnion{d, {}});
    b.W.assign(N, PolyUnion{d, {}});
    b.Z.assign(N, PolyUnion{d, {}});
    for (std::size_t n = N; n-- > 0;) {
        const auto& S = b.cones[n].cone;
        if (m.exercise.allowed[n])
            b.U[n] = translate(S, -m.xi[n]);
        if (b.after[n]) {
            PolyUnion w{d, {Polyhedron::full(d)}};
            try {
                for (auto c : tree.children(n))
                    w = intersect(w, b.Z[c], piece_cap);
            } catch (const std::length_error&) {
                throw CapExceeded("buyer union exceeds " + std::to_string(piece_cap) + " pieces");
            }
            b.W[n] = w;
            b.V[n] = minkowski_sum_cone(w, S);
        }
        std::vector<Polyhedron> pieces = b.V[n].pieces;
        if (b.U[n])
            pieces.push_back(*b.U[n]);
        b.Z[n] = make_union(d, std::move(pieces));
    }
    return b;
}

/// Minus the lowest multiple of e^i in Z at the root.
inline Rational bid_price(const BuyerSets& b, std::size_t i)
{
    std::optional<Rational> low;
    for (const auto& p : b.Z.at(0).pieces) {
        try {
            Rational v = min_along_axis(p, i);
            if (!low || v < *low)
                low = v;
        } catch (const NoAxisIntersection&) {
        }
    }
    if (!low)
        throw NoAxisIntersection();
    return -*low;
}

struct BuyerHedge
{
    Strategy strategy;
    StoppingTime tau;
};

/**
 * Starting from z at the root: stop as soon as the holding lies in U,
 * otherwise rebalance into the first piece of W reachable by a solvent trade.
 * After stopping the portfolio is held unchanged.
 */
inline BuyerHedge buyer_hedge(const Model& m, const BuyerSets& b, const Vec& z)
{
    const auto& tree = m.tree;
    if (!b.Z.at(0).contains(z))
        throw InsufficientEndowment();
    BuyerHedge h;
    h.strategy.initial = z;
    h.strategy.out.resize(tree.size());
    h.tau.stop.assign(tree.size(), false);
    std::vector<bool> done(tree.size(), false);
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const Vec& y = h.strategy.holding(tree, n);
        if (n != tree.root() && done[tree.parent(n)]) {
            done[n] = true;
            h.strategy.out[n] = y;
            continue;
        }
        if (b.U[n] && b.U[n]->contains(y)) {
            h.tau.stop[n] = true;
            done[n] = true;
            h.strategy.out[n] = y;
            continue;
        }
        std::optional<Vec> next;
        for (const auto& piece : b.W[n].pieces)
            if ((next = rebalance_into(y, piece, b.cones[n].generators)))
                break;
        if (!next)
            throw VerificationError("buyer portfolio left the hedgeable set at node '" + tree.id(n) + "'");
        h.strategy.out[n] = *next;
    }
    return h;
}

/**
 * Self-financing; tau is a stopping time consistent with the policy; the
 * portfolio plus the payoff is solvent where tau stops; and tau stops at the
 * first allowed node where that solvency holds.
 */
inline bool verify_buyer_hedge(const BuyerHedge& h, const Model& m)
{
    const auto& tree = m.tree;
    if (h.strategy.out.size() != tree.size() || h.tau.stop.size() != tree.size())
        return false;
    if (!validate_stopping_time(tree, h.tau).empty() || !consistent_with(h.tau, m.exercise))
        return false;
    std::vector<bool> before(tree.size(), false); // stopped strictly before the node
    for (std::size_t n = 0; n < tree.size(); ++n) {
        if (n != tree.root())
            before[n] = before[tree.parent(n)] || h.tau.stop[tree.parent(n)];
        auto cone = build_solvency_cone(m.pi.at(n)).cone;
        const Vec& y = h.strategy.holding(tree, n);
        if (!cone.contains(y - h.strategy.out[n]))
            return false;
        if (before[n])
            continue;
        bool solvent = m.exercise.allowed[n] && cone.contains(y + m.xi[n]);
        if (solvent != static_cast<bool>(h.tau.stop[n]))
            return false;
    }
    return true;
}

/// The European option paying -xi where tau stops, exercisable only there.
inline Model stopped_short_claim(const Model& m, const StoppingTime& tau)
{
    Model e = m;
    e.exercise.allowed = tau.stop;
    for (std::size_t n = 0; n < m.tree.size(); ++n)
        e.xi[n] = tau.stop[n] ? Vec(-m.xi[n]) : Vec(m.d(), Rational(0));
    return e;
}

/**
 * Certificate for the bid: the seller's certificate for the short claim
 * stopped at tau, with the value negated. The stopping time in the result
 * is the pure one of tau.
 */
inline DualCertificate buyer_dual(const Model& m, const StoppingTime& tau, std::size_t i,
                                  const MartingalePair& seed)
{
    Model e = stopped_short_claim(m, tau);
    auto sets = build_seller_sets(e);
    auto c = seller_dual(e, sets, i, seed);
    c.value = -c.value;
    return c;
}

namespace detail {

/// Whether { y : a.y < 0 for every a in rows } is nonempty (exact LP).
inline bool strictly_feasible(const std::vector<Vec>& rows, std::size_t dim)
{
    LinearProgram lp(dim + 1);
    for (std::size_t k = 0; k < dim; ++k)
        lp.set_free(k);
    lp.set_cost(dim, 1);
    lp.set_maximize(true);
    for (const auto& a : rows) {
        Vec row(a);
        row.push_back(1);
        lp.add_constraint(std::move(row), Relation::LessEqual, 0);
    }
    lp.add_constraint(unit_vector(dim + 1, dim), Relation::LessEqual, 1);
    auto sol = lp.solve();
    return sol.status == LPStatus::Optimal && sol.value > 0;
}

/// Whether x is a boundary point of the union: some direction leaves every piece.
inline bool on_union_boundary(const PolyUnion& u, const Vec& x)
{
    // Directions leaving piece k form the union over its tight facets of {a.y < 0};
    // pick one tight facet per piece and test the strict system.
    std::vector<std::vector<Vec>> tight;
    for (const auto& p : u.pieces) {
        if (!p.contains(x))
            continue;
        std::vector<Vec> rows;
        for (const auto& h : p.hrep())
            if (dot(h.normal, x) == h.offset)
                rows.push_back(h.normal);
        if (rows.empty())
            return false;
        tight.push_back(std::move(rows));
    }
    std::vector<std::size_t> pick(tight.size(), 0);
    for (;;) {
        std::vector<Vec> rows;
        for (std::size_t k = 0; k < tight.size(); ++k)
            rows.push_back(tight[k][pick[k]]);
        if (strictly_feasible(rows, u.dim))
            return true;
        std::size_t k = 0;
        while (k < tight.size() && ++pick[k] == tight[k].size())
            pick[k++] = 0;
        if (k == tight.size())
            return false;
    }
}

} // namespace detail

/**
 * Vertices of a union of polyhedra: vertices of the pieces and of their
 * pairwise intersections that lie on the boundary of the union.
 */
inline std::vector<Vec> union_vertices(const PolyUnion& u)
{
    std::vector<Vec> cand;
    const auto& ps = u.pieces;
    for (std::size_t a = 0; a < ps.size(); ++a) {
        cand.insert(cand.end(), ps[a].vertices().begin(), ps[a].vertices().end());
        for (std::size_t b = a + 1; b < ps.size(); ++b) {
            auto x = intersect(ps[a], ps[b]);
            if (!x.is_empty())
                cand.insert(cand.end(), x.vertices().begin(), x.vertices().end());
        }
    }
    detail::sort_unique(cand);
    std::vector<Vec> out;
    for (const auto& x : cand)
        if (detail::on_union_boundary(u, x))
            out.push_back(x);
    return out;
}

} // namespace superhedge

#endif // SUPERHEDGE_BUYER_HPP
