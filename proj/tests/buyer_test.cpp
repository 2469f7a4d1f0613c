#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "random_models.hpp"

using namespace superhedge;

namespace {

constexpr std::size_t cash2 = 2;

Model random_small(std::mt19937& rng, std::size_t trial, fixtures::PolicyKind policy = fixtures::PolicyKind::Any)
{
    fixtures::RandomSpec spec;
    spec.d = 2 + trial % 2;
    spec.horizon = 1 + trial % 3;
    spec.max_nodes = spec.d == 3 ? 10 : 16;
    spec.policy = policy;
    return fixtures::random_model(rng, spec);
}

const Vec u_only{-1, 1, -33};
const std::vector<Vec> v_only{{4, Rational(-13, 2), Rational(163, 2)}, {4, Rational(-15, 7), -10}};
const std::vector<Vec> common{{-1, Rational(-39, 7), Rational(361, 3)},
                              {Rational(19, 5), Rational(-15, 7), Rational(-23, 3)},
                              {Rational(39, 10), Rational(-73, 35), -10},
                              {4, Rational(-233, 112), Rational(-89, 8)},
                              {Rational(127, 30), Rational(-15, 7), -12}};

} // namespace

TEST(BuyerGolden, BidAndUnionVertices)
{
    auto m = fixtures::two_stock();
    auto b = build_buyer_sets(m);
    EXPECT_EQ(bid_price(b, cash2), Rational(59, 3));
    EXPECT_EQ(lp_bid(m, cash2).value, Rational(59, 3));

    std::vector<Vec> expected(common);
    expected.push_back(u_only);
    expected.insert(expected.end(), v_only.begin(), v_only.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(union_vertices(b.Z[0]), expected);

    ASSERT_TRUE(b.U[0].has_value());
    const auto& U = *b.U[0];
    const auto& V = b.V[0];
    EXPECT_TRUE(U.contains(u_only));
    EXPECT_FALSE(V.contains(u_only));
    for (const auto& v : v_only) {
        EXPECT_TRUE(V.contains(v));
        EXPECT_FALSE(U.contains(v));
    }
    for (const auto& v : common) {
        EXPECT_TRUE(U.contains(v));
        EXPECT_TRUE(V.contains(v));
    }
}

TEST(BuyerGolden, HedgeableSetIsNotConvex)
{
    auto m = fixtures::two_stock();
    auto b = build_buyer_sets(m);
    const Vec mid = Rational(1, 2) * (u_only + v_only[0]);
    EXPECT_TRUE(b.Z[0].contains(u_only));
    EXPECT_TRUE(b.Z[0].contains(v_only[0]));
    EXPECT_FALSE(b.Z[0].contains(mid));
    EXPECT_FALSE(buyer_superhedgeable(m, mid));
}

TEST(BuyerGolden, HedgesStopWhereTheyShould)
{
    auto m = fixtures::two_stock();
    auto b = build_buyer_sets(m);
    auto h = buyer_hedge(m, b, Vec{0, 0, Rational(-59, 3)});
    EXPECT_TRUE(verify_buyer_hedge(h, m));
    EXPECT_TRUE(h.tau.stop[0]);

    // Deep inside V but outside U: the buyer must wait.
    const Vec z = v_only[0] + Vec{0, 0, 1};
    ASSERT_FALSE(b.U[0]->contains(z));
    auto later = buyer_hedge(m, b, z);
    EXPECT_TRUE(verify_buyer_hedge(later, m));
    EXPECT_FALSE(later.tau.stop[0]);
    for (auto s : stop_times(m.tree, later.tau))
        EXPECT_GE(s, 1u);

    EXPECT_THROW(buyer_hedge(m, b, Vec{0, 0, Rational(-59, 3) - Rational(1, 1000)}), InsufficientEndowment);
    EXPECT_THROW(buyer_hedge(m, b, Vec{0, 0, Rational(-62, 3)}), InsufficientEndowment);
}

TEST(BuyerGolden, CertificateMatchesTheBid)
{
    auto m = fixtures::two_stock();
    auto b = build_buyer_sets(m);
    auto h = buyer_hedge(m, b, Vec{0, 0, Rational(-59, 3)});
    auto c = buyer_dual(m, h.tau, cash2, *check_weak_na(m.tree, m.pi, cash2).witness);
    EXPECT_EQ(c.value, Rational(59, 3));
    EXPECT_TRUE(verify_pair(m.tree, m.pi, c.pair, c.chi, cash2));
    EXPECT_EQ(c.chi.chi, to_randomised(h.tau).chi);
}

TEST(Buyer, RandomBidMatchesEnumerationAndOrdering)
{
    std::mt19937 rng(71);
    for (std::size_t trial = 0; trial < 20; ++trial) {
        auto m = random_small(rng, trial);
        for (std::size_t i = 0; i < m.d(); ++i) {
            auto b = build_buyer_sets(m);
            const Rational bid = bid_price(b, i);
            EXPECT_EQ(bid, lp_bid(m, i).value) << "trial " << trial << " asset " << i;
            EXPECT_LE(bid, ask_price(build_seller_sets(m), i));
            auto h = buyer_hedge(m, b, -bid * unit_vector(m.d(), i));
            EXPECT_TRUE(verify_buyer_hedge(h, m));
            EXPECT_THROW(buyer_hedge(m, b, -(bid + 1) * unit_vector(m.d(), i)), InsufficientEndowment);
            auto c = buyer_dual(m, h.tau, i, *check_weak_na(m.tree, m.pi, i).witness);
            EXPECT_EQ(c.value, bid);
            EXPECT_TRUE(verify_pair(m.tree, m.pi, c.pair, c.chi, i));
        }
    }
}

TEST(Buyer, MembershipMatchesEnumeration)
{
    std::mt19937 rng(81);
    std::uniform_int_distribution<int> coord(-30, 30);
    for (std::size_t trial = 0; trial < 10; ++trial) {
        auto m = random_small(rng, trial);
        auto b = build_buyer_sets(m);
        for (int k = 0; k < 15; ++k) {
            Vec y(m.d());
            for (auto& v : y)
                v = Rational(coord(rng), 2);
            EXPECT_EQ(b.Z[0].contains(y), buyer_superhedgeable(m, y)) << to_string(y);
        }
    }
}

TEST(Buyer, EuropeanBidIsMinusAskOfTheNegatedPayoff)
{
    std::mt19937 rng(91);
    for (std::size_t trial = 0; trial < 12; ++trial) {
        auto m = random_small(rng, trial, fixtures::PolicyKind::European);
        const std::size_t i = m.d() - 1;
        EXPECT_EQ(bid_price(build_buyer_sets(m), i),
                  -ask_price(build_seller_sets(fixtures::scaled(m, Rational(-1))), i));
    }
}

TEST(Buyer, FrictionlessBinomialBidEqualsAskEqualsBackwardInduction)
{
    for (auto [steps, strike] : {std::pair{1, 100}, std::pair{2, 100}, std::pair{3, 110}}) {
        auto b = fixtures::binomial_put(steps, 100, Rational(6, 5), Rational(9, 10), strike, 0);
        const auto& m = b.model;
        const Rational v = fixtures::binomial_value(m.tree, b.stock, m.xi, m.exercise);
        EXPECT_EQ(ask_price(build_seller_sets(m), 1), v);
        EXPECT_EQ(bid_price(build_buyer_sets(m), 1), v);
    }
}

TEST(Buyer, CostsOpenTheSpread)
{
    auto b = fixtures::binomial_put(2, 100, Rational(6, 5), Rational(9, 10), 100, Rational(1, 50));
    const auto& m = b.model;
    const Rational ask = ask_price(build_seller_sets(m), 1);
    const Rational bid = bid_price(build_buyer_sets(m), 1);
    const Rational v = fixtures::binomial_value(m.tree, b.stock, m.xi, m.exercise);
    EXPECT_LT(bid, v);
    EXPECT_GT(ask, v);
}
