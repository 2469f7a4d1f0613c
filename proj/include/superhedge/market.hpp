/**
 * Finite event trees, bid-ask exchange rates, solvency cones and the
 * weak no-arbitrage test.
 *
 * Nodes are stored in breadth-first order, so every parent precedes its
 * children and node 0 is the root. The matrix pi[i][j] at a node is the
 * number of units of asset i needed to buy one unit of asset j there.
 */
#ifndef SUPERHEDGE_MARKET_HPP
#define SUPERHEDGE_MARKET_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lp.hpp"
#include "polyhedron.hpp"
#include "rational.hpp"

namespace superhedge {

class ModelError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class ArbitrageError : public std::runtime_error
{
  public:
    ArbitrageError() : std::runtime_error("weak no-arbitrage fails for this model") {}
};

constexpr std::size_t no_parent = static_cast<std::size_t>(-1);

struct NodeSpec
{
    std::string id;
    std::optional<std::string> parent;
    /// Reference weight; only leaves use it and it must be positive there.
    Rational weight = 1;
};

class EventTree
{
  public:
    EventTree() = default;

    static EventTree from_specs(const std::vector<NodeSpec>& specs)
    {
        if (specs.empty())
            throw ModelError("tree has no nodes");
        std::map<std::string, std::size_t> pos;
        for (std::size_t k = 0; k < specs.size(); ++k)
            if (!pos.emplace(specs[k].id, k).second)
                throw ModelError("duplicate node id '" + specs[k].id + "'");
        std::optional<std::size_t> root;
        std::vector<std::vector<std::size_t>> kids(specs.size());
        for (std::size_t k = 0; k < specs.size(); ++k) {
            if (!specs[k].parent) {
                if (root)
                    throw ModelError("more than one root ('" + specs[*root].id + "', '" + specs[k].id + "')");
                root = k;
                continue;
            }
            auto it = pos.find(*specs[k].parent);
            if (it == pos.end())
                throw ModelError("node '" + specs[k].id + "' has unknown parent '" + *specs[k].parent + "'");
            kids[it->second].push_back(k);
        }
        if (!root)
            throw ModelError("tree has no root");

        EventTree t;
        std::vector<std::size_t> order{*root};
        std::vector<std::size_t> index(specs.size(), no_parent);
        index[*root] = 0;
        t.parent_.push_back(no_parent);
        t.time_.push_back(0);
        for (std::size_t head = 0; head < order.size(); ++head) {
            std::size_t s = order[head];
            for (std::size_t c : kids[s]) {
                index[c] = order.size();
                order.push_back(c);
                t.parent_.push_back(index[s]);
                t.time_.push_back(t.time_[index[s]] + 1);
            }
        }
        if (order.size() != specs.size())
            throw ModelError("tree is not connected to the root");
        t.children_.resize(order.size());
        for (std::size_t n = 1; n < order.size(); ++n)
            t.children_[t.parent_[n]].push_back(n);
        for (std::size_t n = 0; n < order.size(); ++n) {
            t.ids_.push_back(specs[order[n]].id);
            t.weight_.push_back(specs[order[n]].weight);
            t.index_[t.ids_.back()] = n;
        }
        t.horizon_ = 0;
        for (auto tm : t.time_)
            t.horizon_ = std::max(t.horizon_, tm);
        for (std::size_t n = 0; n < t.size(); ++n)
            if (t.is_leaf(n)) {
                if (t.time_[n] != t.horizon_)
                    throw ModelError("leaf '" + t.ids_[n] + "' is not at the horizon");
                if (t.weight_[n] <= 0)
                    throw ModelError("leaf '" + t.ids_[n] + "' has nonpositive weight");
            }
        return t;
    }

    /// Recombination-free tree with the given number of children per level.
    static EventTree uniform(const std::vector<std::size_t>& branching)
    {
        std::vector<NodeSpec> specs{{"0", std::nullopt, 1}};
        std::vector<std::string> level{"0"};
        for (std::size_t b : branching) {
            std::vector<std::string> next;
            for (const auto& p : level)
                for (std::size_t k = 0; k < b; ++k) {
                    next.push_back(p + "." + std::to_string(k));
                    specs.push_back({next.back(), p, 1});
                }
            level = std::move(next);
        }
        return from_specs(specs);
    }

    std::size_t size() const { return parent_.size(); }
    std::size_t horizon() const { return horizon_; }
    std::size_t root() const { return 0; }
    std::size_t parent(std::size_t n) const { return parent_.at(n); }
    std::size_t time(std::size_t n) const { return time_.at(n); }
    const std::vector<std::size_t>& children(std::size_t n) const { return children_.at(n); }
    bool is_leaf(std::size_t n) const { return children_.at(n).empty(); }
    const std::string& id(std::size_t n) const { return ids_.at(n); }
    const Rational& weight(std::size_t n) const { return weight_.at(n); }

    std::size_t index_of(const std::string& id) const
    {
        auto it = index_.find(id);
        if (it == index_.end())
            throw ModelError("unknown node id '" + id + "'");
        return it->second;
    }

    std::vector<std::size_t> leaves() const
    {
        std::vector<std::size_t> out;
        for (std::size_t n = 0; n < size(); ++n)
            if (is_leaf(n))
                out.push_back(n);
        return out;
    }

    std::vector<std::size_t> nodes_at(std::size_t t) const
    {
        std::vector<std::size_t> out;
        for (std::size_t n = 0; n < size(); ++n)
            if (time_[n] == t)
                out.push_back(n);
        return out;
    }

    /// Root-to-node path, root first.
    std::vector<std::size_t> path_to(std::size_t n) const
    {
        std::vector<std::size_t> p;
        for (std::size_t m = n; m != no_parent; m = parent_[m])
            p.push_back(m);
        std::reverse(p.begin(), p.end());
        return p;
    }

  private:
    std::vector<std::size_t> parent_, time_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::string> ids_;
    std::vector<Rational> weight_;
    std::map<std::string, std::size_t> index_;
    std::size_t horizon_ = 0;
};

using Matrix = std::vector<Vec>;

/// One bid-ask matrix per node.
struct ExchangeProcess
{
    std::size_t d = 0;
    std::vector<Matrix> pi;

    const Matrix& at(std::size_t node) const { return pi.at(node); }
};

inline void validate_rates(const Matrix& pi, std::size_t d)
{
    if (pi.size() != d)
        throw ModelError("exchange matrix has wrong number of rows");
    for (std::size_t i = 0; i < d; ++i) {
        if (pi[i].size() != d)
            throw ModelError("exchange matrix has wrong number of columns");
        for (std::size_t j = 0; j < d; ++j) {
            if (pi[i][j] <= 0)
                throw ModelError("exchange rates must be positive");
            if (i == j && pi[i][j] != 1)
                throw ModelError("exchange matrix diagonal must be 1");
        }
    }
}

inline void validate_process(const EventTree& tree, const ExchangeProcess& pi)
{
    if (pi.d == 0)
        throw ModelError("number of assets must be positive");
    if (pi.pi.size() != tree.size())
        throw ModelError("need one exchange matrix per node");
    for (const auto& m : pi.pi)
        validate_rates(m, pi.d);
}

/// pi^{ij} = (1 + k) S^j / S^i off the diagonal.
inline Matrix frictionless_to_pi(const Vec& prices, const Rational& k)
{
    if (k < 0)
        throw ModelError("transaction cost rate must be nonnegative");
    for (const auto& s : prices)
        if (s <= 0)
            throw ModelError("prices must be positive");
    const std::size_t d = prices.size();
    Matrix m(d, Vec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m[i][j] = i == j ? Rational(1) : Rational((1 + k) * prices[j] / prices[i]);
    return m;
}

inline ExchangeProcess frictionless_to_pi(const std::vector<Vec>& prices, const Rational& k)
{
    ExchangeProcess p;
    p.d = prices.empty() ? 0 : prices.front().size();
    for (const auto& s : prices) {
        if (s.size() != p.d)
            throw ModelError("price vectors differ in length");
        p.pi.push_back(frictionless_to_pi(s, k));
    }
    return p;
}

/// Generators of the solvency cone: the unit vectors and pi^{ji} e^j - e^i.
inline std::vector<Vec> solvency_generators(const Matrix& pi)
{
    const std::size_t d = pi.size();
    std::vector<Vec> g;
    for (std::size_t k = 0; k < d; ++k)
        g.push_back(unit_vector(d, k));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) {
                Vec v(d, Rational(0));
                v[j] = pi[j][i];
                v[i] = -1;
                g.push_back(std::move(v));
            }
    return g;
}

struct SolvencyCone
{
    std::vector<Vec> generators;
    Polyhedron cone;
    Polyhedron dual;
};

inline SolvencyCone build_solvency_cone(const Matrix& pi)
{
    validate_rates(pi, pi.size());
    const std::size_t d = pi.size();
    SolvencyCone s;
    s.generators = solvency_generators(pi);
    s.cone = cone_from_rays(d, s.generators);
    std::vector<Halfspace> h;
    for (const auto& g : s.generators)
        h.push_back({g, 0});
    s.dual = Polyhedron::from_hrep(d, h);
    return s;
}

inline std::vector<SolvencyCone> build_solvency_cones(const ExchangeProcess& pi)
{
    std::vector<SolvencyCone> out;
    out.reserve(pi.pi.size());
    for (const auto& m : pi.pi)
        out.push_back(build_solvency_cone(m));
    return out;
}

/// The slice of the dual cone at s^i = 1, written out directly:
/// s^i = 1 and s^j <= pi^{kj} s^k for all j != k.
inline Polyhedron dual_cone_section(const Matrix& pi, std::size_t i)
{
    const std::size_t d = pi.size();
    if (i >= d)
        throw std::out_of_range("asset index out of range");
    std::vector<Halfspace> h;
    Vec e = unit_vector(d, i);
    h.push_back({e, 1});
    h.push_back({-e, -1});
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
            if (j != k) {
                Vec a(d, Rational(0));
                a[k] = pi[k][j];
                a[j] = -1;
                h.push_back({a, 0});
            }
    return Polyhedron::from_hrep(d, h);
}

/// Transition probabilities and a price process on a tree.
/// prob[n] is the probability of moving to n from its parent (1 at the root).
struct MartingalePair
{
    std::vector<Rational> prob;
    std::vector<Vec> S;

    /// Unconditional probability of each node.
    std::vector<Rational> absolute(const EventTree& tree) const
    {
        std::vector<Rational> q(tree.size());
        for (std::size_t n = 0; n < tree.size(); ++n)
            q[n] = n == tree.root() ? prob[n] : Rational(q[tree.parent(n)] * prob[n]);
        return q;
    }
};

struct NoArbitrageResult
{
    bool holds = false;
    std::optional<MartingalePair> witness;
    /// Optimal value of the certifying LP (smallest leaf probability).
    Rational margin;
};

/**
 * Weak no-arbitrage holds iff an equivalent martingale pair with S^i = 1 exists.
 * The LP is written in M = q S, q being the unconditional node probabilities,
 * so q = M^i: M lies in the dual cone (M >= 0 covers the unit generators), M
 * sums over children to the parent's, M^i(root) = 1, and eps <= M^i(leaf)
 * for every leaf; eps is maximised.
 */
inline NoArbitrageResult check_weak_na(const EventTree& tree, const ExchangeProcess& pi, std::size_t i)
{
    validate_process(tree, pi);
    const std::size_t d = pi.d, N = tree.size();
    if (i >= d)
        throw std::out_of_range("asset index out of range");
    auto mv = [&](std::size_t n, std::size_t k) { return n * d + k; };
    const std::size_t eps = N * d;
    LinearProgram lp(eps + 1);
    lp.set_cost(eps, 1);
    lp.set_maximize(true);

    lp.add_sparse_constraint({{mv(tree.root(), i), 1}}, Relation::Equal, 1);
    for (std::size_t n = 0; n < N; ++n) {
        for (const auto& g : solvency_generators(pi.at(n))) {
            std::vector<std::pair<std::size_t, Rational>> row;
            for (std::size_t k = 0; k < d; ++k)
                if (!g[k].is_zero())
                    row.push_back({mv(n, k), g[k]});
            if (row.size() > 1)
                lp.add_sparse_constraint(row, Relation::GreaterEqual, 0);
        }
        if (tree.is_leaf(n)) {
            lp.add_sparse_constraint({{eps, 1}, {mv(n, i), -1}}, Relation::LessEqual, 0);
            continue;
        }
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<std::pair<std::size_t, Rational>> row{{mv(n, k), -1}};
            for (auto c : tree.children(n))
                row.push_back({mv(c, k), 1});
            lp.add_sparse_constraint(row, Relation::Equal, 0);
        }
    }
    auto sol = lp.solve();
    NoArbitrageResult res;
    if (sol.status != LPStatus::Optimal || sol.value <= 0) {
        res.margin = sol.status == LPStatus::Optimal ? sol.value : Rational(0);
        return res;
    }
    res.holds = true;
    res.margin = sol.value;
    MartingalePair pair;
    pair.prob.resize(N);
    pair.S.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        const Rational& q = sol.x[mv(n, i)];
        Vec s(d);
        for (std::size_t k = 0; k < d; ++k)
            s[k] = sol.x[mv(n, k)] / q;
        pair.S[n] = std::move(s);
        pair.prob[n] = n == tree.root() ? Rational(1) : Rational(q / sol.x[mv(tree.parent(n), i)]);
    }
    res.witness = std::move(pair);
    return res;
}

} // namespace superhedge

#endif // SUPERHEDGE_MARKET_HPP
