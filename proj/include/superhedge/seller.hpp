/**
 * Seller's side: the backward construction of superhedging portfolio sets,
 * the ask price, an optimal hedge and a dual certificate consisting of a
 * randomised stopping time and an approximate martingale pair that attain
 * the ask price.
 *
 * Per node n at time t, with S the solvency cone and xi the payoff:
 *   U = xi + S where exercise is allowed, R^d elsewhere;
 *   W = intersection of Z over the successors, V = W + S, while exercise
 *       remains possible after n (R^d otherwise);
 *   Z = U ∩ V                  (standard order of settle/trade), or
 *   Z = (W ∩ U) + S            (interchanged order).
 */
#ifndef SUPERHEDGE_SELLER_HPP
#define SUPERHEDGE_SELLER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exercise.hpp"
#include "lp.hpp"
#include "market.hpp"
#include "polyhedron.hpp"

namespace superhedge {

class InsufficientEndowment : public std::runtime_error
{
  public:
    InsufficientEndowment() : std::runtime_error("endowment insufficient") {}
};

class VerificationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Convention { Standard, Interchanged };

/// Payoff vector per node.
using PayoffProcess = std::vector<Vec>;

/// A validated option on a market: everything the constructions need.
struct Model
{
    EventTree tree;
    ExchangeProcess pi;
    PayoffProcess xi;
    ExercisePolicy exercise;

    std::size_t d() const { return pi.d; }
};

inline void validate_model(const Model& m)
{
    validate_process(m.tree, m.pi);
    if (m.xi.size() != m.tree.size())
        throw ModelError("need one payoff vector per node");
    for (const auto& x : m.xi)
        if (x.size() != m.pi.d)
            throw ModelError("payoff vector has wrong length");
    auto issues = validate_policy(m.tree, m.exercise);
    if (!issues.empty())
        throw ModelError("invalid exercise policy: " + issues.front());
}

struct SellerSets
{
    Convention convention = Convention::Standard;
    std::vector<SolvencyCone> cones;
    std::vector<bool> after;
    std::vector<Polyhedron> U, V, W, Z;
};

inline SellerSets build_seller_sets(const Model& m, Convention convention = Convention::Standard)
{
    validate_model(m);
    const auto& tree = m.tree;
    const std::size_t d = m.d(), N = tree.size();
    SellerSets s;
    s.convention = convention;
    s.cones = build_solvency_cones(m.pi);
    s.after = exercise_after(tree, m.exercise);
    s.U.resize(N);
    s.V.resize(N);
    s.W.resize(N);
    s.Z.resize(N);
    for (std::size_t n = N; n-- > 0;) {
        const auto& S = s.cones[n].cone;
        s.U[n] = m.exercise.allowed[n] ? translate(S, m.xi[n]) : Polyhedron::full(d);
        if (s.after[n]) {
            Polyhedron w = Polyhedron::full(d);
            for (auto c : tree.children(n))
                w = intersect(w, s.Z[c]);
            s.W[n] = w;
            s.V[n] = minkowski_sum_cone(w, S);
        } else {
            s.W[n] = s.V[n] = Polyhedron::full(d);
        }
        if (convention == Convention::Standard)
            s.Z[n] = intersect(s.U[n], s.V[n]);
        else
            s.Z[n] = minkowski_sum_cone(intersect(s.W[n], s.U[n]), S);
        if (s.Z[n].is_empty())
            throw ArbitrageError();
    }
    return s;
}

inline Rational ask_price(const SellerSets& s, std::size_t i)
{
    return min_along_axis(s.Z.at(0), i);
}

/// Portfolio y_t held on arrival at each node (fixed at the parent), and the
/// portfolio y_{t+1} chosen at the node. Leaves keep what they hold.
struct Strategy
{
    Vec initial;
    std::vector<Vec> out;

    const Vec& holding(const EventTree& tree, std::size_t n) const
    {
        return n == tree.root() ? initial : out.at(tree.parent(n));
    }
};

/**
 * Finds y' in `target` with y - y' in the cone generated by `gens`, using as
 * little trading (sum of generator weights) as possible. nullopt if none.
 */
inline std::optional<Vec> rebalance_into(const Vec& y, const Polyhedron& target, const std::vector<Vec>& gens)
{
    if (target.is_empty())
        return std::nullopt;
    const std::size_t d = y.size(), G = gens.size();
    LinearProgram lp(d + G);
    for (std::size_t k = 0; k < d; ++k)
        lp.set_free(k);
    for (std::size_t g = 0; g < G; ++g)
        lp.set_cost(d + g, 1);
    // y' + sum beta_g g = y
    for (std::size_t k = 0; k < d; ++k) {
        Vec row(d + G, Rational(0));
        row[k] = 1;
        for (std::size_t g = 0; g < G; ++g)
            row[d + g] = gens[g][k];
        lp.add_constraint(std::move(row), Relation::Equal, y[k]);
    }
    for (const auto& h : target.hrep()) {
        Vec row(d + G, Rational(0));
        std::copy(h.normal.begin(), h.normal.end(), row.begin());
        lp.add_constraint(std::move(row), Relation::GreaterEqual, h.offset);
    }
    auto sol = lp.solve();
    if (sol.status != LPStatus::Optimal)
        return std::nullopt;
    return Vec(sol.x.begin(), sol.x.begin() + d);
}

inline Strategy seller_hedge(const Model& m, const SellerSets& s, const Rational& x0, std::size_t i)
{
    if (s.convention != Convention::Standard)
        throw std::invalid_argument("hedging is implemented for the standard convention only");
    const auto& tree = m.tree;
    Strategy y;
    y.initial = x0 * unit_vector(m.d(), i);
    if (!s.Z[0].contains(y.initial))
        throw InsufficientEndowment();
    y.out.resize(tree.size());
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const Vec& h = y.holding(tree, n);
        if (!s.after[n]) {
            y.out[n] = h;
            continue;
        }
        auto next = rebalance_into(h, s.W[n], s.cones[n].generators);
        if (!next)
            throw VerificationError("no rebalancing into the successor set at node '" + tree.id(n) + "'");
        y.out[n] = *next;
    }
    return y;
}

/// Self-financing everywhere and y_t - xi_t solvent wherever exercise is allowed.
inline bool verify_seller_hedge(const Strategy& y, const Model& m)
{
    const auto& tree = m.tree;
    if (y.out.size() != tree.size())
        return false;
    for (std::size_t n = 0; n < tree.size(); ++n) {
        auto cone = build_solvency_cone(m.pi.at(n)).cone;
        const Vec& h = y.holding(tree, n);
        if (!cone.contains(h - y.out[n]))
            return false;
        if (m.exercise.allowed[n] && !cone.contains(h - m.xi[n]))
            return false;
    }
    return true;
}

struct NodeEpigraphs
{
    SupportEpigraph U, V, W, Z;
};

inline std::vector<NodeEpigraphs> support_epigraphs(const SellerSets& s)
{
    std::vector<NodeEpigraphs> out;
    for (std::size_t n = 0; n < s.Z.size(); ++n)
        out.push_back({support_epigraph(s.U[n]), support_epigraph(s.V[n]), support_epigraph(s.W[n]),
                       support_epigraph(s.Z[n])});
    return out;
}

/**
 * Vertices of the section {y^i = 1} of an epigraph, written as
 * (y without its i-th entry, -y0): the upper boundary of the negated
 * support function over the normalised price simplex.
 */
inline std::vector<Vec> dual_section_vertices(const SupportEpigraph& epi, std::size_t i)
{
    std::vector<Vec> out;
    const Polyhedron section = epigraph_section(epi, i);
    for (const auto& v : section.vertices()) {
        Vec p;
        for (std::size_t k = 0; k < epi.dim(); ++k)
            if (k != i)
                p.push_back(v[k + 1]);
        p.push_back(-v[0]);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct DualCertificate
{
    RandomisedStoppingTime chi;
    MartingalePair pair;
    Rational value;
    std::vector<Rational> lambda;
    std::vector<Vec> X, Y;
};

/// Sum over nodes of P(node) chi(node) xi(node).S(node).
inline Rational expectation(const EventTree& tree, const MartingalePair& pair, const PayoffProcess& xi,
                            const RandomisedStoppingTime& chi)
{
    auto q = pair.absolute(tree);
    Rational e = 0;
    for (std::size_t n = 0; n < tree.size(); ++n)
        if (!chi.chi[n].is_zero() && !q[n].is_zero())
            e += q[n] * chi.chi[n] * dot(xi[n], pair.S[n]);
    return e;
}

namespace detail {

/// Section at y^i = 1 of the epigraph of a set, in (y0, y) coordinates.
inline Polyhedron epi_section(const Polyhedron& a, std::size_t i)
{
    return epigraph_section(support_epigraph(a), i);
}

/// Lexicographically least vertex, i.e. smallest y0 first.
inline Vec lowest_vertex(const Polyhedron& section)
{
    if (section.is_empty())
        throw GeometryError("empty epigraph section");
    return section.vertices().front();
}

inline Vec drop_head(const Vec& v) { return Vec(v.begin() + 1, v.end()); }

inline Vec with_head(const Rational& h, const Vec& y)
{
    Vec v{h};
    v.insert(v.end(), y.begin(), y.end());
    return v;
}

} // namespace detail

/**
 * Builds a randomised stopping time chi and a chi-approximate martingale pair
 * (P, S) with S^i = 1 whose value E_P[sum_t chi_t xi_t.S_t] equals the ask.
 *
 * Forward pass from the root. Y at the root is the lowest vertex of the
 * section of epi Z_0; at every node (Z(Y), Y) is split in the hull of the
 * sections of epi U and epi V, giving lambda, S (from U) and X (from V); then
 * (V(X), X) is split over the successors' sections of epi Z, giving the
 * transition probabilities and the successors' Y. Where the construction
 * leaves a choice free (zero weights, no future exercise) the seed pair from
 * the no-arbitrage test is used.
 */
inline DualCertificate seller_dual(const Model& m, const SellerSets& s, std::size_t i,
                                   const MartingalePair& seed)
{
    if (s.convention != Convention::Standard)
        throw std::invalid_argument("dual construction is implemented for the standard convention only");
    const auto& tree = m.tree;
    const std::size_t N = tree.size();
    DualCertificate c;
    c.lambda.assign(N, Rational(0));
    c.X.resize(N);
    c.Y.resize(N);
    c.pair.prob.assign(N, Rational(0));
    c.pair.S.resize(N);
    c.pair.prob[tree.root()] = 1;
    std::vector<Rational> zval(N), star(N);
    std::vector<bool> live(N, false);
    auto future = future_exercise(tree, m.exercise);

    std::vector<std::optional<Polyhedron>> zsec(N);
    auto z_section = [&](std::size_t n) -> const Polyhedron& {
        if (!zsec[n])
            zsec[n] = detail::epi_section(s.Z[n], i);
        return *zsec[n];
    };

    {
        Vec v = detail::lowest_vertex(z_section(tree.root()));
        zval[0] = v[0];
        c.Y[0] = detail::drop_head(v);
        live[0] = true;
    }
    star[0] = 1;

    for (std::size_t n = 0; n < N; ++n) {
        const bool e = m.exercise.allowed[n], after = s.after[n];
        Rational vval = 0;
        if (!future[n] || !live[n]) {
            c.lambda[n] = 0;
            c.X[n] = seed.S[n];
            c.pair.S[n] = seed.S[n];
        } else if (e && after) {
            Polyhedron usec = detail::epi_section(s.U[n], i);
            Polyhedron vsec = detail::epi_section(s.V[n], i);
            auto terms = decompose_in_hull(detail::with_head(zval[n], c.Y[n]), {vsec, usec});
            std::optional<Vec> xw, sw;
            for (const auto& t : terms) {
                if (t.piece == 1) {
                    c.lambda[n] = t.weight;
                    sw = t.witness;
                } else {
                    xw = t.witness;
                }
            }
            if (!xw)
                xw = detail::lowest_vertex(vsec);
            vval = (*xw)[0];
            c.X[n] = detail::drop_head(*xw);
            c.pair.S[n] = sw ? detail::drop_head(*sw) : seed.S[n];
        } else if (e) {
            c.lambda[n] = 1;
            c.X[n] = seed.S[n];
            c.pair.S[n] = c.Y[n];
        } else {
            c.lambda[n] = 0;
            c.X[n] = c.Y[n];
            vval = zval[n];
            c.pair.S[n] = seed.S[n];
        }

        const auto& kids = tree.children(n);
        if (kids.empty())
            continue;
        if (live[n] && after) {
            std::vector<Polyhedron> pieces;
            for (auto k : kids)
                pieces.push_back(z_section(k));
            auto terms = decompose_in_hull(detail::with_head(vval, c.X[n]), pieces);
            std::vector<bool> got(kids.size(), false);
            for (const auto& t : terms) {
                auto k = kids[t.piece];
                got[t.piece] = true;
                c.pair.prob[k] = t.weight;
                zval[k] = t.witness[0];
                c.Y[k] = detail::drop_head(t.witness);
                live[k] = true;
            }
            for (std::size_t j = 0; j < kids.size(); ++j)
                if (!got[j]) {
                    auto k = kids[j];
                    Vec v = detail::lowest_vertex(z_section(k));
                    c.pair.prob[k] = 0;
                    zval[k] = v[0];
                    c.Y[k] = detail::drop_head(v);
                    live[k] = true;
                }
        } else {
            for (auto k : kids) {
                c.pair.prob[k] = seed.prob[k];
                c.Y[k] = seed.S[k];
            }
        }
    }

    c.chi.chi.assign(N, Rational(0));
    for (std::size_t n = 0; n < N; ++n) {
        if (n != tree.root())
            star[n] = star[tree.parent(n)] - c.chi.chi[tree.parent(n)];
        c.chi.chi[n] = c.lambda[n] * star[n];
    }
    c.value = expectation(tree, c.pair, m.xi, c.chi);
    return c;
}

} // namespace superhedge

#endif // SUPERHEDGE_SELLER_HPP
