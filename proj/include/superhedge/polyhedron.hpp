/**
 * Exact rational convex polyhedra.
 *
 * A Polyhedron always carries both representations:
 *   - H-rep: halfspaces  normal . x >= offset  (equalities appear as pairs),
 *   - V-rep: vertices + rays + lines (lines span the lineality space).
 * Both are canonical: irredundant, reduced modulo equalities/lines against
 * their reduced row echelon form, scaled to primitive integers and sorted
 * lexicographically. Two polyhedra describe the same set iff their
 * representations compare equal.
 *
 * Conversions use the double description method on the homogenised cone
 *   { (t, x) : normal . x - offset * t >= 0, t >= 0 },
 * with the lineality space tracked explicitly, so halfspaces and other
 * non-pointed sets are handled directly.
 */
#ifndef SUPERHEDGE_POLYHEDRON_HPP
#define SUPERHEDGE_POLYHEDRON_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "lp.hpp"
#include "rational.hpp"

namespace superhedge {

class GeometryError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// The axis line does not meet the polyhedron.
class NoAxisIntersection : public GeometryError
{
  public:
    NoAxisIntersection() : GeometryError("no axis intersection") {}
};

/// A linear functional is unbounded over the polyhedron.
class UnboundedError : public GeometryError
{
  public:
    UnboundedError() : GeometryError("unbounded") {}
};

class NotInHull : public GeometryError
{
  public:
    NotInHull() : GeometryError("not in hull") {}
};

struct Halfspace
{
    Vec normal;
    Rational offset;

    bool satisfied_by(const Vec& x) const { return dot(normal, x) >= offset; }
    bool operator==(const Halfspace&) const = default;
};

inline bool operator<(const Halfspace& a, const Halfspace& b)
{
    if (a.normal != b.normal)
        return a.normal < b.normal;
    return a.offset < b.offset;
}

namespace detail {

struct ConeGenerators
{
    std::vector<Vec> rays;
    std::vector<Vec> lines;
};

/// Generators of { z in R^n : row . z >= 0 for every row }.
inline ConeGenerators cone_from_inequalities(const std::vector<Vec>& rows, std::size_t n)
{
    struct Ray
    {
        Vec v;
        boost::dynamic_bitset<> tight;
    };
    std::vector<Vec> lines;
    for (std::size_t k = 0; k < n; ++k)
        lines.push_back(unit_vector(n, k));
    std::vector<Ray> rays;
    std::size_t processed = 0;

    for (const Vec& a : rows) {
        if (is_zero(a))
            continue;
        const std::size_t idx = processed++;
        for (auto& r : rays)
            r.tight.push_back(false);

        auto lit = std::find_if(lines.begin(), lines.end(),
                                [&](const Vec& l) { return !dot(a, l).is_zero(); });
        if (lit != lines.end()) {
            Vec l = *lit;
            lines.erase(lit);
            Rational al = dot(a, l);
            if (al < 0) {
                l = -l;
                al = -al;
            }
            for (auto& other : lines) {
                Rational c = dot(a, other);
                if (!c.is_zero())
                    other = primitive(other - (c / al) * l);
            }
            for (auto& r : rays) {
                Rational c = dot(a, r.v);
                if (!c.is_zero())
                    r.v = primitive(r.v - (c / al) * l);
                r.tight[idx] = true;
            }
            boost::dynamic_bitset<> tight(idx + 1);
            tight.set();
            tight[idx] = false;
            rays.push_back({primitive(l), std::move(tight)});
            continue;
        }

        std::vector<Rational> val(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray> next;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            val[k] = dot(a, rays[k].v);
            if (val[k] > 0)
                pos.push_back(k);
            else if (val[k] < 0)
                neg.push_back(k);
        }
        if (neg.empty()) {
            for (std::size_t k = 0; k < rays.size(); ++k)
                if (val[k].is_zero())
                    rays[k].tight[idx] = true;
            continue;
        }
        const std::size_t pointed_dim = n - lines.size();
        for (std::size_t p : pos)
            for (std::size_t q : neg) {
                boost::dynamic_bitset<> common = rays[p].tight & rays[q].tight;
                if (pointed_dim >= 2 && common.count() + 2 < pointed_dim)
                    continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
                    if (k != p && k != q && common.is_subset_of(rays[k].tight))
                        adjacent = false;
                if (!adjacent)
                    continue;
                Vec v = primitive(val[p] * rays[q].v - val[q] * rays[p].v);
                common[idx] = true;
                next.push_back({std::move(v), std::move(common)});
            }
        for (std::size_t k = 0; k < rays.size(); ++k) {
            if (val[k] > 0)
                next.push_back(std::move(rays[k]));
            else if (val[k].is_zero()) {
                rays[k].tight[idx] = true;
                next.push_back(std::move(rays[k]));
            }
        }
        rays = std::move(next);
    }

    ConeGenerators out;
    out.lines = std::move(lines);
    for (auto& r : rays)
        out.rays.push_back(std::move(r.v));
    return out;
}

/// Reduced row echelon form with unit pivots; zero rows are dropped.
/// Returns the rows together with their pivot columns.
inline std::pair<std::vector<Vec>, std::vector<std::size_t>> rref(std::vector<Vec> m)
{
    std::vector<std::size_t> pivots;
    if (m.empty())
        return {m, pivots};
    const std::size_t cols = m.front().size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][c].is_zero())
            ++sel;
        if (sel == m.size())
            continue;
        std::swap(m[row], m[sel]);
        Rational inv = 1 / m[row][c];
        for (auto& x : m[row])
            x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != row && !m[r][c].is_zero())
                m[r] = m[r] - m[r][c] * m[row];
        pivots.push_back(c);
        ++row;
    }
    m.resize(row);
    return {m, pivots};
}

/// Eliminates the pivot columns of `basis` (in RREF) from `v`.
inline Vec reduce_modulo(Vec v, const std::vector<Vec>& basis, const std::vector<std::size_t>& pivots)
{
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (!v[pivots[k]].is_zero())
            v = v - v[pivots[k]] * basis[k];
    return v;
}

inline void sort_unique(std::vector<Vec>& vs)
{
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

} // namespace detail

class Polyhedron
{
  public:
    Polyhedron() = default;

    static Polyhedron full(std::size_t dim) { return from_hrep(dim, {}); }

    static Polyhedron empty(std::size_t dim)
    {
        Polyhedron p;
        p.dim_ = dim;
        p.empty_ = true;
        p.hrep_ = {{Vec(dim, Rational(0)), Rational(1)}};
        return p;
    }

    static Polyhedron from_hrep(std::size_t dim, const std::vector<Halfspace>& hrep);
    static Polyhedron from_vrep(std::size_t dim, const std::vector<Vec>& vertices,
                                const std::vector<Vec>& rays, const std::vector<Vec>& lines = {});

    std::size_t dim() const { return dim_; }
    bool is_empty() const { return empty_; }
    bool is_full() const { return !empty_ && hrep_.empty(); }
    bool is_bounded() const { return rays_.empty() && lines_.empty(); }
    /// Single vertex at the origin.
    bool is_cone() const { return !empty_ && vertices_.size() == 1 && is_zero(vertices_[0]); }

    const std::vector<Halfspace>& hrep() const { return hrep_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<Vec>& rays() const { return rays_; }
    const std::vector<Vec>& lines() const { return lines_; }

    bool contains(const Vec& x) const
    {
        check_dim(x);
        return std::all_of(hrep_.begin(), hrep_.end(),
                           [&](const Halfspace& h) { return h.satisfied_by(x); });
    }

    /// d . x >= 0 on every halfspace normal, i.e. d is a recession direction.
    bool recedes_along(const Vec& d) const
    {
        check_dim(d);
        return std::all_of(hrep_.begin(), hrep_.end(),
                           [&](const Halfspace& h) { return dot(h.normal, d) >= 0; });
    }

    bool operator==(const Polyhedron& o) const
    {
        return dim_ == o.dim_ && empty_ == o.empty_ && vertices_ == o.vertices_ &&
               rays_ == o.rays_ && lines_ == o.lines_;
    }

    /// Canonical order used to sort union pieces.
    bool operator<(const Polyhedron& o) const
    {
        if (empty_ != o.empty_)
            return empty_;
        if (vertices_ != o.vertices_)
            return vertices_ < o.vertices_;
        if (rays_ != o.rays_)
            return rays_ < o.rays_;
        return lines_ < o.lines_;
    }

  private:
    void check_dim(const Vec& x) const
    {
        if (x.size() != dim_)
            throw std::invalid_argument("dimension mismatch");
    }

    static Polyhedron build_from_cone(std::size_t dim, const detail::ConeGenerators& gens);
    void compute_hrep();

    std::size_t dim_ = 0;
    bool empty_ = true;
    std::vector<Halfspace> hrep_;
    std::vector<Vec> vertices_, rays_, lines_;
};

inline Polyhedron Polyhedron::build_from_cone(std::size_t dim, const detail::ConeGenerators& gens)
{
    Polyhedron p;
    p.dim_ = dim;
    std::vector<Vec> lines;
    for (const auto& l : gens.lines)
        lines.emplace_back(l.begin() + 1, l.end());
    auto [basis, pivots] = detail::rref(lines);
    for (const auto& g : gens.rays) {
        Vec x(g.begin() + 1, g.end());
        x = detail::reduce_modulo(std::move(x), basis, pivots);
        if (g[0] > 0)
            p.vertices_.push_back((1 / g[0]) * x);
        else if (!is_zero(x))
            p.rays_.push_back(primitive(x));
    }
    if (p.vertices_.empty())
        return empty(dim);
    p.empty_ = false;
    for (const auto& b : basis)
        p.lines_.push_back(primitive(b));
    detail::sort_unique(p.vertices_);
    detail::sort_unique(p.rays_);
    detail::sort_unique(p.lines_);
    return p;
}

inline void Polyhedron::compute_hrep()
{
    hrep_.clear();
    if (empty_) {
        hrep_ = {{Vec(dim_, Rational(0)), Rational(1)}};
        return;
    }
    // Polar cone K* = { (beta, a) : beta + a.v >= 0, a.r >= 0, a.l = 0 }.
    std::vector<Vec> rows;
    auto lift = [&](const Rational& head, const Vec& x) {
        Vec z(dim_ + 1);
        z[0] = head;
        std::copy(x.begin(), x.end(), z.begin() + 1);
        return z;
    };
    for (const auto& v : vertices_)
        rows.push_back(lift(1, v));
    for (const auto& r : rays_)
        rows.push_back(lift(0, r));
    for (const auto& l : lines_) {
        rows.push_back(lift(0, l));
        rows.push_back(lift(0, -l));
    }
    auto polar = detail::cone_from_inequalities(rows, dim_ + 1);

    // Equalities a.x = -beta from the lineality of K*, in RREF over [a | -beta].
    std::vector<Vec> eq;
    for (const auto& l : polar.lines) {
        Vec row(l.begin() + 1, l.end());
        row.push_back(-l[0]);
        eq.push_back(std::move(row));
    }
    auto [basis, pivots] = detail::rref(eq);
    for (const auto& g : polar.rays) {
        Vec row(g.begin() + 1, g.end());
        row.push_back(-g[0]);
        row = detail::reduce_modulo(std::move(row), basis, pivots);
        if (std::all_of(row.begin(), row.end() - 1, [](const Rational& x) { return x.is_zero(); }))
            continue;
        row = primitive(row);
        hrep_.push_back({Vec(row.begin(), row.end() - 1), row.back()});
    }
    for (const auto& b : basis) {
        Vec row = primitive(b);
        Vec neg = -row;
        hrep_.push_back({Vec(row.begin(), row.end() - 1), row.back()});
        hrep_.push_back({Vec(neg.begin(), neg.end() - 1), neg.back()});
    }
    std::sort(hrep_.begin(), hrep_.end());
    hrep_.erase(std::unique(hrep_.begin(), hrep_.end()), hrep_.end());
}

inline Polyhedron Polyhedron::from_hrep(std::size_t dim, const std::vector<Halfspace>& hrep)
{
    std::vector<Vec> rows;
    rows.push_back(unit_vector(dim + 1, 0));
    for (const auto& h : hrep) {
        if (h.normal.size() != dim)
            throw std::invalid_argument("halfspace dimension mismatch");
        Vec z(dim + 1);
        z[0] = -h.offset;
        std::copy(h.normal.begin(), h.normal.end(), z.begin() + 1);
        rows.push_back(std::move(z));
    }
    Polyhedron p = build_from_cone(dim, detail::cone_from_inequalities(rows, dim + 1));
    p.compute_hrep();
    return p;
}

inline Polyhedron Polyhedron::from_vrep(std::size_t dim, const std::vector<Vec>& vertices,
                                        const std::vector<Vec>& rays, const std::vector<Vec>& lines)
{
    if (vertices.empty())
        throw std::invalid_argument("V-representation needs at least one vertex");
    for (const auto* group : {&vertices, &rays, &lines})
        for (const auto& v : *group)
            if (v.size() != dim)
                throw std::invalid_argument("generator dimension mismatch");
    Polyhedron raw;
    raw.dim_ = dim;
    raw.empty_ = false;
    raw.vertices_ = vertices;
    raw.rays_ = rays;
    raw.lines_ = lines;
    raw.compute_hrep();
    // Round trip through the facets to drop redundant generators.
    return from_hrep(dim, raw.hrep_);
}

inline std::ostream& operator<<(std::ostream& os, const Polyhedron& p)
{
    if (p.is_empty())
        return os << "empty(" << p.dim() << ")";
    os << "{vertices:";
    for (const auto& v : p.vertices())
        os << ' ' << to_string(v);
    os << "; rays:";
    for (const auto& r : p.rays())
        os << ' ' << to_string(r);
    os << "; lines:";
    for (const auto& l : p.lines())
        os << ' ' << to_string(l);
    return os << '}';
}

/// Polyhedron described by the given halfspaces, with its generators computed.
inline Polyhedron vrep_from_hrep(std::size_t dim, const std::vector<Halfspace>& hrep)
{
    return Polyhedron::from_hrep(dim, hrep);
}

/// conv(vertices) + cone(rays) + span(lines), with its facets computed.
inline Polyhedron hrep_from_vrep(std::size_t dim, const std::vector<Vec>& vertices,
                                 const std::vector<Vec>& rays, const std::vector<Vec>& lines = {})
{
    return Polyhedron::from_vrep(dim, vertices, rays, lines);
}

inline Polyhedron point(const Vec& x)
{
    return Polyhedron::from_vrep(x.size(), {x}, {});
}

inline Polyhedron cone_from_rays(std::size_t dim, const std::vector<Vec>& rays,
                                 const std::vector<Vec>& lines = {})
{
    return Polyhedron::from_vrep(dim, {Vec(dim, Rational(0))}, rays, lines);
}

inline Polyhedron intersect(const Polyhedron& p, const Polyhedron& q)
{
    if (p.dim() != q.dim())
        throw std::invalid_argument("intersect: dimension mismatch");
    if (p.is_empty() || q.is_empty())
        return Polyhedron::empty(p.dim());
    if (p.is_full())
        return q;
    if (q.is_full())
        return p;
    std::vector<Halfspace> h = p.hrep();
    h.insert(h.end(), q.hrep().begin(), q.hrep().end());
    return Polyhedron::from_hrep(p.dim(), h);
}

/// P + C for a cone C.
inline Polyhedron minkowski_sum_cone(const Polyhedron& p, const Polyhedron& cone)
{
    if (p.dim() != cone.dim())
        throw std::invalid_argument("minkowski_sum_cone: dimension mismatch");
    if (!cone.is_cone())
        throw std::invalid_argument("minkowski_sum_cone: second argument is not a cone");
    if (p.is_empty())
        return p;
    std::vector<Vec> rays = p.rays(), lines = p.lines();
    rays.insert(rays.end(), cone.rays().begin(), cone.rays().end());
    lines.insert(lines.end(), cone.lines().begin(), cone.lines().end());
    return Polyhedron::from_vrep(p.dim(), p.vertices(), rays, lines);
}

inline Polyhedron translate(const Polyhedron& p, const Vec& shift)
{
    if (p.is_empty())
        return p;
    std::vector<Vec> vs;
    for (const auto& v : p.vertices())
        vs.push_back(v + shift);
    return Polyhedron::from_vrep(p.dim(), vs, p.rays(), p.lines());
}

/// Closed convex hull of the union of the pieces. Empty pieces are ignored.
inline Polyhedron hull_of_union(const std::vector<Polyhedron>& pieces)
{
    if (pieces.empty())
        throw std::invalid_argument("hull_of_union: no pieces");
    const std::size_t dim = pieces.front().dim();
    std::vector<Vec> vs, rs, ls;
    for (const auto& p : pieces) {
        if (p.dim() != dim)
            throw std::invalid_argument("hull_of_union: dimension mismatch");
        if (p.is_empty())
            continue;
        vs.insert(vs.end(), p.vertices().begin(), p.vertices().end());
        rs.insert(rs.end(), p.rays().begin(), p.rays().end());
        ls.insert(ls.end(), p.lines().begin(), p.lines().end());
    }
    if (vs.empty())
        return Polyhedron::empty(dim);
    return Polyhedron::from_vrep(dim, vs, rs, ls);
}

/// sup { -y . x : x in A }, or nullopt for +infinity.
inline std::optional<Rational> support_of_negation(const Polyhedron& a, const Vec& y)
{
    if (a.is_empty())
        throw std::invalid_argument("support_of_negation: empty set");
    if (y.size() != a.dim())
        throw std::invalid_argument("support_of_negation: dimension mismatch");
    for (const auto& l : a.lines())
        if (!dot(y, l).is_zero())
            return std::nullopt;
    for (const auto& r : a.rays())
        if (dot(y, r) < 0)
            return std::nullopt;
    std::optional<Rational> best;
    for (const auto& v : a.vertices()) {
        Rational val = -dot(y, v);
        if (!best || val > *best)
            best = val;
    }
    return best;
}

/// { x in C : x^i = 1 }.
inline Polyhedron section(const Polyhedron& c, std::size_t axis)
{
    if (axis >= c.dim())
        throw std::out_of_range("section: axis out of range");
    if (c.is_empty())
        return c;
    std::vector<Halfspace> h = c.hrep();
    Vec e = unit_vector(c.dim(), axis);
    h.push_back({e, 1});
    h.push_back({-e, -1});
    return Polyhedron::from_hrep(c.dim(), h);
}

/// Section is nonempty and bounded, and regenerates C.
inline bool is_compactly_generated(const Polyhedron& c, std::size_t axis)
{
    if (!c.is_cone())
        return false;
    Polyhedron s = section(c, axis);
    if (s.is_empty() || !s.is_bounded())
        return false;
    return cone_from_rays(c.dim(), s.vertices()) == c;
}

/// min { x : x e^axis in P }.
inline Rational min_along_axis(const Polyhedron& p, std::size_t axis)
{
    if (axis >= p.dim())
        throw std::out_of_range("min_along_axis: axis out of range");
    if (p.is_empty())
        throw NoAxisIntersection();
    std::optional<Rational> lower, upper;
    for (const auto& h : p.hrep()) {
        const Rational& a = h.normal[axis];
        if (a.is_zero()) {
            if (h.offset > 0)
                throw NoAxisIntersection();
            continue;
        }
        Rational bound = h.offset / a;
        if (a > 0) {
            if (!lower || bound > *lower)
                lower = bound;
        } else if (!upper || bound < *upper) {
            upper = bound;
        }
    }
    if (lower && upper && *lower > *upper)
        throw NoAxisIntersection();
    if (!lower)
        throw UnboundedError();
    return *lower;
}

inline bool subset_of(const Polyhedron& p, const Polyhedron& q)
{
    if (p.is_empty())
        return true;
    if (q.is_empty())
        return false;
    for (const auto& v : p.vertices())
        if (!q.contains(v))
            return false;
    for (const auto& r : p.rays())
        if (!q.recedes_along(r))
            return false;
    for (const auto& l : p.lines())
        if (!q.recedes_along(l) || !q.recedes_along(-l))
            return false;
    return true;
}

/// Mutual containment; independent of the canonical-form comparison.
inline bool set_equal(const Polyhedron& p, const Polyhedron& q)
{
    return subset_of(p, q) && subset_of(q, p);
}

struct HullTerm
{
    Rational weight;
    Vec witness;
    std::size_t piece;
};

/**
 * Writes x as sum_k weight_k * witness_k with witness_k in pieces[k],
 * weights >= 0 summing to 1. Only pieces with positive weight are returned
 * (at most dim + 1 of them, from a basic LP solution).
 *
 * Recession directions used by a zero-weight piece are moved into a
 * positive-weight piece that shares them; if none does, x lies only in the
 * closure of the hull and NotInHull is thrown.
 */
inline std::vector<HullTerm> decompose_in_hull(const Vec& x, const std::vector<Polyhedron>& pieces)
{
    if (pieces.empty())
        throw std::invalid_argument("decompose_in_hull: no pieces");
    const std::size_t dim = x.size();
    struct Column
    {
        std::size_t piece;
        int kind; // 0 vertex, 1 ray, 2 line
        const Vec* gen;
    };
    std::vector<Column> cols;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& p = pieces[k];
        if (p.dim() != dim)
            throw std::invalid_argument("decompose_in_hull: dimension mismatch");
        if (p.is_empty())
            continue;
        for (const auto& v : p.vertices())
            cols.push_back({k, 0, &v});
        for (const auto& r : p.rays())
            cols.push_back({k, 1, &r});
        for (const auto& l : p.lines())
            cols.push_back({k, 2, &l});
    }
    if (cols.empty())
        throw NotInHull();

    LinearProgram lp(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j].kind == 2)
            lp.set_free(j);
    for (std::size_t c = 0; c < dim; ++c) {
        Vec row(cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            row[j] = (*cols[j].gen)[c];
        lp.add_constraint(std::move(row), Relation::Equal, x[c]);
    }
    Vec ones(cols.size(), Rational(0));
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j].kind == 0)
            ones[j] = 1;
    lp.add_constraint(std::move(ones), Relation::Equal, 1);
    LPSolution sol = lp.solve();
    if (sol.status != LPStatus::Optimal)
        throw NotInHull();

    std::vector<Rational> weight(pieces.size(), Rational(0));
    std::vector<Vec> combo(pieces.size(), Vec(dim, Rational(0)));
    std::vector<Vec> recession(pieces.size(), Vec(dim, Rational(0)));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Rational& lam = sol.x[j];
        if (lam.is_zero())
            continue;
        const auto k = cols[j].piece;
        if (cols[j].kind == 0) {
            weight[k] += lam;
            combo[k] = combo[k] + lam * *cols[j].gen;
        } else {
            recession[k] = recession[k] + lam * *cols[j].gen;
        }
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (is_zero(recession[k]))
            continue;
        if (weight[k] > 0) {
            combo[k] = combo[k] + recession[k];
            continue;
        }
        bool absorbed = false;
        for (std::size_t m = 0; m < pieces.size() && !absorbed; ++m)
            if (weight[m] > 0 && pieces[m].recedes_along(recession[k])) {
                combo[m] = combo[m] + recession[k];
                absorbed = true;
            }
        if (!absorbed)
            throw NotInHull();
    }
    std::vector<HullTerm> terms;
    for (std::size_t k = 0; k < pieces.size(); ++k)
        if (weight[k] > 0)
            terms.push_back({weight[k], (1 / weight[k]) * combo[k], k});
    return terms;
}

/// Epigraph of the support function of -A:  { (y0, y) : y0 >= sup_{x in A} -y.x }.
/// Coordinates are ordered (y0, y^1, ..., y^d).
struct SupportEpigraph
{
    Polyhedron base;

    std::size_t dim() const { return base.dim() - 1; }

    /// The support value at y, or nullopt outside the effective domain.
    std::optional<Rational> value(const Vec& y) const
    {
        Vec z(y.size() + 1);
        std::copy(y.begin(), y.end(), z.begin() + 1);
        // Vertical ray (1,0,...,0) is always present; minimise y0 over the fibre.
        std::optional<Rational> lo;
        for (const auto& h : base.hrep()) {
            const Rational& a = h.normal[0];
            Rational rest = h.offset - dot(h.normal, z);
            if (a.is_zero()) {
                if (rest > 0)
                    return std::nullopt;
                continue;
            }
            if (a < 0)
                throw GeometryError("support epigraph is not upward closed");
            Rational bound = rest / a;
            if (!lo || bound > *lo)
                lo = bound;
        }
        return lo;
    }
};

inline SupportEpigraph support_epigraph(const Polyhedron& a)
{
    if (a.is_empty())
        throw std::invalid_argument("support_epigraph: empty set");
    const std::size_t d = a.dim();
    std::vector<Halfspace> h;
    auto lift = [&](const Rational& head, const Vec& x) {
        Vec z(d + 1);
        z[0] = head;
        std::copy(x.begin(), x.end(), z.begin() + 1);
        return z;
    };
    for (const auto& v : a.vertices())
        h.push_back({lift(1, v), 0});
    for (const auto& r : a.rays())
        h.push_back({lift(0, r), 0});
    for (const auto& l : a.lines()) {
        h.push_back({lift(0, l), 0});
        h.push_back({lift(0, -l), 0});
    }
    return {Polyhedron::from_hrep(d + 1, h)};
}

/// Section of an epigraph at y^axis = 1 (axis indexes y, not the lifted space).
inline Polyhedron epigraph_section(const SupportEpigraph& epi, std::size_t axis)
{
    return section(epi.base, axis + 1);
}

/// A finite union of polyhedra of a common dimension.
struct PolyUnion
{
    std::size_t dim = 0;
    std::vector<Polyhedron> pieces;

    bool is_empty() const
    {
        return std::all_of(pieces.begin(), pieces.end(),
                           [](const Polyhedron& p) { return p.is_empty(); });
    }

    bool contains(const Vec& x) const
    {
        return std::any_of(pieces.begin(), pieces.end(),
                           [&](const Polyhedron& p) { return p.contains(x); });
    }
};

/// Drops empty pieces and pieces contained in another piece; sorts canonically.
inline PolyUnion reduce_union(const PolyUnion& u)
{
    std::vector<Polyhedron> ps;
    for (const auto& p : u.pieces)
        if (!p.is_empty())
            ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<bool> drop(ps.size(), false);
    for (std::size_t a = 0; a < ps.size(); ++a) {
        if (drop[a])
            continue;
        for (std::size_t b = 0; b < ps.size(); ++b)
            if (a != b && !drop[b] && subset_of(ps[a], ps[b])) {
                drop[a] = true;
                break;
            }
    }
    PolyUnion out{u.dim, {}};
    for (std::size_t a = 0; a < ps.size(); ++a)
        if (!drop[a])
            out.pieces.push_back(std::move(ps[a]));
    return out;
}

inline PolyUnion make_union(std::size_t dim, std::vector<Polyhedron> pieces)
{
    return reduce_union({dim, std::move(pieces)});
}

/// Intersection of unions by distributing over pieces.
inline PolyUnion intersect(const PolyUnion& a, const PolyUnion& b, std::size_t cap)
{
    if (a.pieces.size() * b.pieces.size() > cap)
        throw std::length_error("union piece cap exceeded");
    PolyUnion out{a.dim, {}};
    for (const auto& p : a.pieces)
        for (const auto& q : b.pieces) {
            Polyhedron r = intersect(p, q);
            if (!r.is_empty())
                out.pieces.push_back(std::move(r));
        }
    return reduce_union(out);
}

inline PolyUnion minkowski_sum_cone(const PolyUnion& u, const Polyhedron& cone)
{
    PolyUnion out{u.dim, {}};
    for (const auto& p : u.pieces)
        out.pieces.push_back(minkowski_sum_cone(p, cone));
    return reduce_union(out);
}

} // namespace superhedge

#endif // SUPERHEDGE_POLYHEDRON_HPP
