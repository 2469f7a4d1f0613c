#include <gtest/gtest.h>

#include <random>

#include "random_models.hpp"

using namespace superhedge;

namespace {

// Every subset of nodes that stops exactly once per path and only where allowed.
std::vector<StoppingTime> brute_force_stopping_times(const EventTree& tree, const ExercisePolicy& e)
{
    std::vector<StoppingTime> out;
    const std::size_t N = tree.size();
    for (unsigned long mask = 0; mask < (1ul << N); ++mask) {
        StoppingTime tau{std::vector<bool>(N, false)};
        for (std::size_t n = 0; n < N; ++n)
            tau.stop[n] = (mask >> n) & 1u;
        if (validate_stopping_time(tree, tau).empty() && consistent_with(tau, e))
            out.push_back(tau);
    }
    std::sort(out.begin(), out.end());
    return out;
}

EventTree two_step() { return EventTree::uniform({2, 2}); }

} // namespace

TEST(Policy, StandardPoliciesAreValid)
{
    auto t = two_step();
    EXPECT_TRUE(validate_policy(t, make_american(t)).empty());
    EXPECT_TRUE(validate_policy(t, make_european(t)).empty());
    EXPECT_TRUE(validate_policy(t, make_bermudan(t, {1})).empty());
    EXPECT_EQ(make_bermudan(t, {0, 2}).allowed, (std::vector<bool>{true, false, false, true, true, true, true}));
    EXPECT_EQ(make_european(t).allowed, make_bermudan(t, {2}).allowed);
}

TEST(Policy, BermudanArgumentsChecked)
{
    auto t = two_step();
    EXPECT_THROW(make_bermudan(t, {}), std::invalid_argument);
    EXPECT_THROW(make_bermudan(t, {3}), std::invalid_argument);
}

TEST(Policy, DetectsMissingAndInconsistentExercise)
{
    auto t = two_step();
    ExercisePolicy none{std::vector<bool>(t.size(), false)};
    EXPECT_FALSE(validate_policy(t, none).empty());
    // Exercise possible below "0.0" but not below "0.1".
    ExercisePolicy lopsided{std::vector<bool>(t.size(), false)};
    lopsided.allowed[t.index_of("0.0.0")] = true;
    lopsided.allowed[t.index_of("0.0.1")] = true;
    lopsided.allowed[0] = true;
    auto issues = validate_policy(t, lopsided);
    EXPECT_FALSE(issues.empty());
    ExercisePolicy short_size{std::vector<bool>(3, true)};
    EXPECT_FALSE(validate_policy(t, short_size).empty());
}

TEST(Policy, FutureExerciseAndAfter)
{
    auto t = two_step();
    auto e = make_bermudan(t, {1});
    auto star = future_exercise(t, e);
    auto after = exercise_after(t, e);
    EXPECT_TRUE(star[0]);
    EXPECT_TRUE(after[0]);
    EXPECT_TRUE(star[1]);
    EXPECT_FALSE(after[1]);
    EXPECT_FALSE(star[t.index_of("0.0.0")]);
    EXPECT_FALSE(after[t.index_of("0.0.0")]);
}

TEST(Policy, RandomExpiry)
{
    auto t = two_step();
    StoppingTime sigma{std::vector<bool>(t.size(), false)};
    sigma.stop[t.index_of("0.0")] = true;
    sigma.stop[t.index_of("0.1.0")] = true;
    sigma.stop[t.index_of("0.1.1")] = true;
    auto e = make_random_expiry(t, sigma);
    EXPECT_TRUE(validate_policy(t, e).empty());
    EXPECT_TRUE(e.allowed[t.index_of("0.0")]);
    EXPECT_FALSE(e.allowed[t.index_of("0.0.0")]);
    EXPECT_TRUE(e.allowed[t.index_of("0.1.1")]);
    StoppingTime bad{std::vector<bool>(t.size(), false)};
    EXPECT_THROW(make_random_expiry(t, bad), std::invalid_argument);
}

TEST(StoppingTimes, TwoStockAmericanHasTwo)
{
    auto m = fixtures::two_stock();
    auto all = enumerate_stopping_times(m.tree, m.exercise);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(count_stopping_times(m.tree, m.exercise, 100), 2u);
    EXPECT_EQ(stop_times(m.tree, all[0]), (std::vector<std::size_t>{0, 0, 0, 0}));
    EXPECT_EQ(stop_times(m.tree, all[1]), (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(StoppingTimes, EnumerationMatchesBruteForce)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        fixtures::RandomSpec spec;
        spec.horizon = 1 + trial % 3;
        spec.max_nodes = 12;
        auto m = fixtures::random_model(rng, spec);
        auto all = enumerate_stopping_times(m.tree, m.exercise);
        auto sorted = all;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
        EXPECT_EQ(sorted, brute_force_stopping_times(m.tree, m.exercise));
        EXPECT_EQ(count_stopping_times(m.tree, m.exercise, 1000000), all.size());
    }
}

TEST(StoppingTimes, CapIsEnforced)
{
    auto t = EventTree::uniform({3, 3, 3});
    auto e = make_american(t);
    // 1 + (1 + (1 + 1)^3)^3 = 730
    EXPECT_EQ(count_stopping_times(t, e, 10000), 730u);
    EXPECT_EQ(count_stopping_times(t, e, 100), 101u);
    EXPECT_THROW(enumerate_stopping_times(t, e, 729), CapExceeded);
    EXPECT_EQ(enumerate_stopping_times(t, e, 730).size(), 730u);
}

TEST(StoppingTimes, WitnessStopsAtTheRequestedDate)
{
    auto t = two_step();
    auto american = make_american(t);
    for (std::size_t tp = 0; tp <= 2; ++tp) {
        auto tau = witness_stopping_time(t, american, tp);
        EXPECT_TRUE(validate_stopping_time(t, tau).empty());
        for (auto s : stop_times(t, tau))
            EXPECT_EQ(s, tp);
    }
    auto bermudan = make_bermudan(t, {0, 2});
    auto tau = witness_stopping_time(t, bermudan, 1);
    EXPECT_TRUE(consistent_with(tau, bermudan));
    for (auto s : stop_times(t, tau))
        EXPECT_EQ(s, 2u);
}

TEST(RandomisedStoppingTimes, PureAndMixed)
{
    auto t = two_step();
    auto all = enumerate_stopping_times(t, make_american(t));
    for (const auto& tau : all) {
        auto chi = to_randomised(tau);
        EXPECT_TRUE(is_pure(chi));
        EXPECT_TRUE(validate_randomised(t, make_american(t), chi));
    }
    // Half at the root, the rest at time 1 on the first branch and time 2 on the second.
    RandomisedStoppingTime chi{std::vector<Rational>(t.size(), Rational(0))};
    chi.chi[0] = Rational(1, 2);
    chi.chi[t.index_of("0.0")] = Rational(1, 2);
    for (auto leaf : {"0.1.0", "0.1.1"})
        chi.chi[t.index_of(leaf)] = Rational(1, 2);
    EXPECT_FALSE(is_pure(chi));
    EXPECT_TRUE(validate_randomised(t, make_american(t), chi));
    EXPECT_FALSE(validate_randomised(t, make_european(t), chi));
    auto star = chi_star(t, chi);
    EXPECT_EQ(star[0], 1);
    EXPECT_EQ(star[t.index_of("0.0")], Rational(1, 2));
    EXPECT_EQ(star[t.index_of("0.0.0")], 0);
    EXPECT_EQ(star[t.index_of("0.1.1")], Rational(1, 2));

    chi.chi[0] = Rational(1, 3);
    EXPECT_FALSE(validate_randomised(t, make_american(t), chi));
    chi.chi[0] = Rational(-1, 2);
    EXPECT_FALSE(validate_randomised(t, make_american(t), chi));
}
