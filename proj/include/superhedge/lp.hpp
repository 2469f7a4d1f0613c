/**
 * Dense two-phase primal simplex over exact rationals.
 *
 * Entering columns follow the most negative reduced cost; after a degenerate
 * pivot Bland's rule takes over until the objective strictly improves again,
 * which rules out cycling. Ties break by index, so the returned basis is a
 * deterministic function of the input. Sizes handled here are desk-scale
 * (a few hundred rows), which is all the pricing oracles need.
 */
#ifndef SUPERHEDGE_LP_HPP
#define SUPERHEDGE_LP_HPP

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace superhedge {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint
{
    Vec coeffs;
    Relation relation;
    Rational rhs;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution
{
    LPStatus status = LPStatus::Infeasible;
    Rational value;
    Vec x;
    /// One multiplier per constraint: c - A^T y is nonnegative on sign-constrained
    /// variables (nonpositive when maximising), zero on free ones, and b.y == value.
    Vec duals;
};

class LinearProgram
{
  public:
    explicit LinearProgram(std::size_t num_vars = 0) : free_(num_vars, false), objective_(num_vars) {}

    std::size_t num_vars() const { return free_.size(); }

    /// Adds a variable and returns its index. Free variables have no sign constraint.
    std::size_t add_variable(bool free_sign = false, const Rational& cost = 0)
    {
        free_.push_back(free_sign);
        objective_.push_back(cost);
        for (auto& c : constraints_)
            c.coeffs.emplace_back(0);
        return free_.size() - 1;
    }

    void set_free(std::size_t j, bool free_sign = true) { free_.at(j) = free_sign; }
    bool is_free(std::size_t j) const { return free_.at(j); }

    void set_objective(Vec c, bool maximize = false)
    {
        if (c.size() != num_vars())
            throw std::invalid_argument("objective size mismatch");
        objective_ = std::move(c);
        maximize_ = maximize;
    }
    void set_cost(std::size_t j, const Rational& c) { objective_.at(j) = c; }
    void set_maximize(bool maximize) { maximize_ = maximize; }

    void add_constraint(Vec coeffs, Relation rel, Rational rhs)
    {
        if (coeffs.size() != num_vars())
            throw std::invalid_argument("constraint size mismatch");
        constraints_.push_back({std::move(coeffs), rel, std::move(rhs)});
    }

    /// Sparse form: (variable index, coefficient) pairs.
    void add_sparse_constraint(const std::vector<std::pair<std::size_t, Rational>>& terms,
                               Relation rel, Rational rhs)
    {
        Vec row(num_vars(), Rational(0));
        for (const auto& [j, a] : terms)
            row.at(j) += a;
        add_constraint(std::move(row), rel, std::move(rhs));
    }

    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Vec& objective() const { return objective_; }
    bool maximize() const { return maximize_; }

    LPSolution solve() const;

  private:
    std::vector<bool> free_;
    Vec objective_;
    bool maximize_ = false;
    std::vector<Constraint> constraints_;
};

namespace detail {

class Tableau
{
  public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows, Vec(cols + 1, Rational(0))), basis_(rows, 0), cols_(cols)
    {
    }

    Rational& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
    Rational& rhs(std::size_t r) { return rows_[r][cols_]; }
    const Rational& rhs(std::size_t r) const { return rows_[r][cols_]; }
    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }
    const std::vector<std::size_t>& basis() const { return basis_; }

    // Reduced-cost row; the last entry holds minus the objective value.
    Vec objective;

    void pivot(std::size_t pr, std::size_t pc)
    {
        Vec& prow = rows_[pr];
        Rational inv = 1 / prow[pc];
        std::vector<std::size_t> nz;
        for (std::size_t c = 0; c <= cols_; ++c)
            if (!prow[c].is_zero()) {
                prow[c] *= inv;
                nz.push_back(c);
            }
        auto eliminate = [&](Vec& row) {
            if (row[pc].is_zero())
                return;
            Rational f = row[pc];
            for (std::size_t c : nz)
                row[c] -= f * prow[c];
        };
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (r != pr)
                eliminate(rows_[r]);
        eliminate(objective);
        basis_[pr] = pc;
    }

    /// Runs simplex iterations; columns >= `enter_limit` may not enter.
    /// Returns false if the objective is unbounded below.
    bool optimize(std::size_t enter_limit)
    {
        bool bland = false;
        for (;;) {
            std::size_t enter = enter_limit;
            for (std::size_t c = 0; c < enter_limit; ++c) {
                if (objective[c] >= 0)
                    continue;
                if (enter == enter_limit || objective[c] < objective[enter])
                    enter = c;
                if (bland)
                    break;
            }
            if (enter == enter_limit)
                return true;
            std::size_t leave = rows_.size();
            Rational best;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                const Rational& a = rows_[r][enter];
                if (a <= 0)
                    continue;
                Rational ratio = rows_[r][cols_] / a;
                if (leave == rows_.size() || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == rows_.size())
                return false;
            bland = best.is_zero();
            pivot(leave, enter);
        }
    }

  private:
    std::vector<Vec> rows_;
    std::vector<std::size_t> basis_;
    std::size_t cols_;
};

} // namespace detail

inline LPSolution LinearProgram::solve() const
{
    const std::size_t n = num_vars();
    const std::size_t m = constraints_.size();

    // Column layout: [x+ for each var][x- for free vars][slacks][artificials].
    // Rows whose slack enters the basis with coefficient +1 get no artificial.
    std::vector<std::size_t> pos(n), neg(n, static_cast<std::size_t>(-1));
    std::size_t col = 0;
    for (std::size_t j = 0; j < n; ++j)
        pos[j] = col++;
    for (std::size_t j = 0; j < n; ++j)
        if (free_[j])
            neg[j] = col++;
    std::vector<int> flip(m, 1);
    std::vector<std::size_t> slack(m, static_cast<std::size_t>(-1));
    std::vector<bool> slack_basic(m, false);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& con = constraints_[r];
        flip[r] = con.rhs < 0 ? -1 : 1;
        if (con.relation == Relation::Equal)
            continue;
        slack[r] = col++;
        slack_basic[r] = (con.relation == Relation::LessEqual ? 1 : -1) * flip[r] == 1;
    }
    const std::size_t first_artificial = col;
    // unit[r]: the column that starts as the r-th unit vector; it tracks B^-1 e_r.
    std::vector<std::size_t> unit(m);
    for (std::size_t r = 0; r < m; ++r)
        unit[r] = slack_basic[r] ? slack[r] : col++;
    const std::size_t total = col;

    detail::Tableau tab(m, total);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& con = constraints_[r];
        const int sign = flip[r];
        for (std::size_t j = 0; j < n; ++j) {
            if (con.coeffs[j].is_zero())
                continue;
            Rational a = sign > 0 ? con.coeffs[j] : Rational(-con.coeffs[j]);
            tab.at(r, pos[j]) = a;
            if (free_[j])
                tab.at(r, neg[j]) = -a;
        }
        if (slack[r] != static_cast<std::size_t>(-1))
            tab.at(r, slack[r]) = (con.relation == Relation::LessEqual ? 1 : -1) * sign;
        tab.at(r, unit[r]) = 1;
        tab.rhs(r) = sign > 0 ? con.rhs : Rational(-con.rhs);
        tab.basis()[r] = unit[r];
    }

    // Phase 1: minimise the sum of the basic artificials.
    tab.objective.assign(total + 1, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis()[r] < first_artificial)
            continue;
        for (std::size_t c = 0; c <= total; ++c)
            if (c < first_artificial || c == total)
                tab.objective[c] -= tab.at(r, c);
    }
    tab.optimize(first_artificial);

    LPSolution sol;
    if (!tab.objective[total].is_zero()) {
        sol.status = LPStatus::Infeasible;
        return sol;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis()[r] < first_artificial)
            continue;
        for (std::size_t c = 0; c < first_artificial; ++c)
            if (!tab.at(r, c).is_zero()) {
                tab.pivot(r, c);
                break;
            }
    }

    // Phase 2.
    Vec cost(total, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        Rational c = maximize_ ? Rational(-objective_[j]) : objective_[j];
        cost[pos[j]] = c;
        if (free_[j])
            cost[neg[j]] = -c;
    }
    tab.objective.assign(total + 1, Rational(0));
    for (std::size_t c = 0; c < total; ++c)
        tab.objective[c] = cost[c];
    for (std::size_t r = 0; r < m; ++r) {
        const Rational& cb = cost[tab.basis()[r]];
        if (cb.is_zero())
            continue;
        for (std::size_t c = 0; c <= total; ++c)
            if (!tab.at(r, c).is_zero())
                tab.objective[c] -= cb * tab.at(r, c);
    }
    if (!tab.optimize(first_artificial)) {
        sol.status = LPStatus::Unbounded;
        return sol;
    }

    Vec values(total, Rational(0));
    for (std::size_t r = 0; r < m; ++r)
        values[tab.basis()[r]] = tab.rhs(r);
    sol.status = LPStatus::Optimal;
    sol.x.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = values[pos[j]];
        if (free_[j])
            sol.x[j] -= values[neg[j]];
    }
    sol.value = 0;
    for (std::size_t j = 0; j < n; ++j)
        sol.value += objective_[j] * sol.x[j];

    sol.duals.assign(m, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        Rational y = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const Rational& cb = cost[tab.basis()[k]];
            if (!cb.is_zero())
                y += cb * tab.at(k, unit[r]);
        }
        if (flip[r] < 0)
            y = -y;
        sol.duals[r] = maximize_ ? Rational(-y) : y;
    }
    return sol;
}

} // namespace superhedge

#endif // SUPERHEDGE_LP_HPP
