/**
 * Exercise policies, stopping times and randomised stopping times on an
 * event tree. Everything is stored per node; a policy says at which nodes
 * exercise is permitted.
 */
#ifndef SUPERHEDGE_EXERCISE_HPP
#define SUPERHEDGE_EXERCISE_HPP

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "market.hpp"
#include "rational.hpp"

namespace superhedge {

class CapExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct ExercisePolicy
{
    std::vector<bool> allowed;

    bool operator==(const ExercisePolicy&) const = default;
};

/// A pure stopping time: the nodes at which it stops.
struct StoppingTime
{
    std::vector<bool> stop;

    bool operator==(const StoppingTime&) const = default;
    bool operator<(const StoppingTime& o) const { return stop < o.stop; }
};

/// Weights chi per node; they sum to one along every root-to-leaf path.
struct RandomisedStoppingTime
{
    std::vector<Rational> chi;
};

/// Exercise is allowed at this node or, on every path through it, later.
inline std::vector<bool> future_exercise(const EventTree& tree, const ExercisePolicy& e)
{
    std::vector<bool> star(tree.size(), false);
    for (std::size_t n = tree.size(); n-- > 0;) {
        bool later = !tree.is_leaf(n);
        for (auto c : tree.children(n))
            later = later && star[c];
        star[n] = e.allowed[n] || later;
    }
    return star;
}

/// Whether exercise is still possible strictly after the node, on every path.
inline std::vector<bool> exercise_after(const EventTree& tree, const ExercisePolicy& e)
{
    auto star = future_exercise(tree, e);
    std::vector<bool> after(tree.size(), false);
    for (std::size_t n = 0; n < tree.size(); ++n) {
        bool all = !tree.is_leaf(n);
        for (auto c : tree.children(n))
            all = all && star[c];
        after[n] = all;
    }
    return after;
}

/// Empty iff the policy is valid.
inline std::vector<std::string> validate_policy(const EventTree& tree, const ExercisePolicy& e)
{
    std::vector<std::string> issues;
    if (e.allowed.size() != tree.size()) {
        issues.push_back("policy has " + std::to_string(e.allowed.size()) + " entries for " +
                         std::to_string(tree.size()) + " nodes");
        return issues;
    }
    auto star = future_exercise(tree, e);
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const auto& kids = tree.children(n);
        bool any = false, all = true;
        for (auto c : kids) {
            any = any || star[c];
            all = all && star[c];
        }
        if (any && !all)
            issues.push_back("successors of node '" + tree.id(n) +
                             "' disagree on whether exercise remains possible");
    }
    for (auto leaf : tree.leaves()) {
        bool hit = false;
        for (auto m : tree.path_to(leaf))
            hit = hit || e.allowed[m];
        if (!hit)
            issues.push_back("no exercise opportunity on the path to '" + tree.id(leaf) + "'");
    }
    return issues;
}

inline ExercisePolicy make_european(const EventTree& tree)
{
    ExercisePolicy e{std::vector<bool>(tree.size(), false)};
    for (auto leaf : tree.leaves())
        e.allowed[leaf] = true;
    return e;
}

inline ExercisePolicy make_american(const EventTree& tree)
{
    return {std::vector<bool>(tree.size(), true)};
}

inline ExercisePolicy make_bermudan(const EventTree& tree, const std::vector<std::size_t>& dates)
{
    if (dates.empty())
        throw std::invalid_argument("Bermudan policy needs at least one date");
    std::set<std::size_t> ds(dates.begin(), dates.end());
    for (auto t : ds)
        if (t > tree.horizon())
            throw std::invalid_argument("exercise date beyond the horizon");
    ExercisePolicy e{std::vector<bool>(tree.size(), false)};
    for (std::size_t n = 0; n < tree.size(); ++n)
        e.allowed[n] = ds.count(tree.time(n)) > 0;
    return e;
}

/// Lists the problems with a pure stopping time; empty iff valid.
inline std::vector<std::string> validate_stopping_time(const EventTree& tree, const StoppingTime& tau)
{
    std::vector<std::string> issues;
    if (tau.stop.size() != tree.size())
        return {"stopping time has wrong size"};
    for (auto leaf : tree.leaves()) {
        int hits = 0;
        for (auto m : tree.path_to(leaf))
            hits += tau.stop[m] ? 1 : 0;
        if (hits != 1)
            issues.push_back("path to '" + tree.id(leaf) + "' stops " + std::to_string(hits) + " times");
    }
    return issues;
}

/// Exercise allowed until sigma has passed: at nodes none of whose strict ancestors stop.
inline ExercisePolicy make_random_expiry(const EventTree& tree, const StoppingTime& sigma)
{
    if (!validate_stopping_time(tree, sigma).empty())
        throw std::invalid_argument("expiry is not a stopping time");
    ExercisePolicy e{std::vector<bool>(tree.size(), true)};
    for (std::size_t n = 1; n < tree.size(); ++n) {
        std::size_t p = tree.parent(n);
        e.allowed[n] = e.allowed[p] && !sigma.stop[p];
    }
    return e;
}

inline std::vector<std::size_t> stop_times(const EventTree& tree, const StoppingTime& tau)
{
    std::vector<std::size_t> out;
    for (auto leaf : tree.leaves())
        for (auto m : tree.path_to(leaf))
            if (tau.stop[m]) {
                out.push_back(tree.time(m));
                break;
            }
    return out;
}

/// Whether tau stops only where exercise is allowed.
inline bool consistent_with(const StoppingTime& tau, const ExercisePolicy& e)
{
    for (std::size_t n = 0; n < tau.stop.size(); ++n)
        if (tau.stop[n] && !e.allowed[n])
            return false;
    return true;
}

/// Number of stopping times consistent with the policy, saturating at cap + 1.
inline std::size_t count_stopping_times(const EventTree& tree, const ExercisePolicy& e, std::size_t cap)
{
    std::vector<std::size_t> count(tree.size(), 0);
    const std::size_t limit = cap + 1;
    for (std::size_t n = tree.size(); n-- > 0;) {
        std::size_t below = 0;
        if (!tree.is_leaf(n)) {
            below = 1;
            for (auto c : tree.children(n)) {
                if (count[c] == 0) {
                    below = 0;
                    break;
                }
                below = below > limit / count[c] ? limit : std::min(limit, below * count[c]);
            }
        }
        count[n] = std::min(limit, below + (e.allowed[n] ? 1 : 0));
    }
    return count[tree.root()];
}

/**
 * All stopping times consistent with the policy. Order: stopping at a node
 * comes before continuing past it; continuations are ordered
 * lexicographically over the children.
 */
inline std::vector<StoppingTime> enumerate_stopping_times(const EventTree& tree, const ExercisePolicy& e,
                                                          std::size_t cap = 1000000)
{
    if (count_stopping_times(tree, e, cap) > cap)
        throw CapExceeded("more than " + std::to_string(cap) + " stopping times");
    // Stop sets of the subtree rooted at each node.
    std::vector<std::vector<std::vector<std::size_t>>> options(tree.size());
    for (std::size_t n = tree.size(); n-- > 0;) {
        auto& opts = options[n];
        if (e.allowed[n])
            opts.push_back({n});
        if (tree.is_leaf(n))
            continue;
        std::vector<std::vector<std::size_t>> partial{{}};
        for (auto c : tree.children(n)) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& p : partial)
                for (const auto& o : options[c]) {
                    auto merged = p;
                    merged.insert(merged.end(), o.begin(), o.end());
                    next.push_back(std::move(merged));
                }
            partial = std::move(next);
        }
        opts.insert(opts.end(), partial.begin(), partial.end());
    }
    std::vector<StoppingTime> out;
    for (const auto& o : options[tree.root()]) {
        StoppingTime tau{std::vector<bool>(tree.size(), false)};
        for (auto n : o)
            tau.stop[n] = true;
        out.push_back(std::move(tau));
    }
    return out;
}

/**
 * A consistent stopping time whose stop set at time t' is exactly the set of
 * time-t' exercise nodes: along each path stop at the first node where
 * exercise is allowed and either no later exercise remains or the node is at
 * or after t'.
 */
inline StoppingTime witness_stopping_time(const EventTree& tree, const ExercisePolicy& e, std::size_t t_prime)
{
    auto after = exercise_after(tree, e);
    StoppingTime tau{std::vector<bool>(tree.size(), false)};
    std::vector<bool> stopped(tree.size(), false);
    for (std::size_t n = 0; n < tree.size(); ++n) {
        bool above = n != tree.root() && stopped[tree.parent(n)];
        if (above) {
            stopped[n] = true;
            continue;
        }
        const std::size_t t = tree.time(n);
        bool here = e.allowed[n] && (t >= t_prime || !after[n]);
        tau.stop[n] = here;
        stopped[n] = here;
    }
    return tau;
}

inline RandomisedStoppingTime to_randomised(const StoppingTime& tau)
{
    RandomisedStoppingTime chi;
    for (bool s : tau.stop)
        chi.chi.push_back(s ? Rational(1) : Rational(0));
    return chi;
}

/// chi*_t = 1 - sum of chi before t; predictable, so it is fixed at the parent.
inline std::vector<Rational> chi_star(const EventTree& tree, const RandomisedStoppingTime& chi)
{
    std::vector<Rational> star(tree.size());
    for (std::size_t n = 0; n < tree.size(); ++n)
        star[n] = n == tree.root() ? Rational(1)
                                   : Rational(star[tree.parent(n)] - chi.chi[tree.parent(n)]);
    return star;
}

/// chi >= 0, supported where exercise is allowed, and summing to 1 on every path.
inline bool validate_randomised(const EventTree& tree, const ExercisePolicy& e, const RandomisedStoppingTime& chi)
{
    if (chi.chi.size() != tree.size() || e.allowed.size() != tree.size())
        return false;
    for (std::size_t n = 0; n < tree.size(); ++n) {
        if (chi.chi[n] < 0)
            return false;
        if (chi.chi[n] > 0 && !e.allowed[n])
            return false;
    }
    auto star = chi_star(tree, chi);
    for (auto leaf : tree.leaves())
        if (star[leaf] != chi.chi[leaf])
            return false;
    return true;
}

/// Whether chi is the indicator of a pure stopping time.
inline bool is_pure(const RandomisedStoppingTime& chi)
{
    for (const auto& c : chi.chi)
        if (c != 0 && c != 1)
            return false;
    return true;
}

} // namespace superhedge

#endif // SUPERHEDGE_EXERCISE_HPP
