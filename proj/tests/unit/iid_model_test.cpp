#include <gtest/gtest.h>

#include <cmath>

#include "riskorder/iid_model.hpp"
#include "support/random_models.hpp"

namespace riskorder {
namespace {

IncrementDist inc(std::vector<Atom> a) { return IncrementDist(DiscreteDist::from_atoms(std::move(a))); }

TEST(IncrementDist, NeedsBothSigns) {
    EXPECT_THROW(inc({{0.1, 0.5}, {0.2, 0.5}}), PreconditionViolation);
    EXPECT_THROW(inc({{-0.1, 1.0}}), PreconditionViolation);
    EXPECT_NEAR(inc({{1, 0.6}, {-0.5, 0.4}}).drift(), 0.4, 1e-15);
}

TEST(OptimalFraction, SymmetricZeroMeanIsZero) {
    auto r = inc({{0.1, 0.5}, {-0.1, 0.5}});
    for (double p : {0.3, 0.9, 1.0, 4.0}) EXPECT_NEAR(optimal_fraction(r, p), 0.0, 1e-12);
}

TEST(OptimalFraction, MatchesRootFinderOracle) {
    // Bisection on 0.6 (1+pi)^-p - 0.2 (1-pi/2)^-p = 0 over (-1, 2).
    const double p = 0.9;
    auto foc = [p](double pi) { return 0.6 * std::pow(1 + pi, -p) - 0.2 * std::pow(1 - 0.5 * pi, -p); };
    double lo = -0.999999, hi = 1.999999;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (foc(mid) > 0 ? lo : hi) = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    EXPECT_NEAR(oracle, 0.887, 1e-3);
    EXPECT_NEAR(optimal_fraction(inc({{1, 0.6}, {-0.5, 0.4}}), p), oracle, 1e-12);
}

TEST(OptimalFraction, DecreasesWithRiskAversion) {
    auto r = inc({{0.3, 0.55}, {-0.2, 0.45}});
    double prev = optimal_fraction(r, 1.0);
    for (double p = 2; p <= 256; p *= 2) {
        const double pi = optimal_fraction(r, p);
        EXPECT_LT(pi, prev);
        EXPECT_GT(pi, 0.0);
        prev = pi;
    }
}

TEST(OptimalFraction, SignFollowsDrift) {
    EXPECT_LT(optimal_fraction(inc({{0.1, 0.4}, {-0.1, 0.6}}), 2.0), 0.0);
    EXPECT_GT(optimal_fraction(inc({{0.1, 0.6}, {-0.1, 0.4}}), 2.0), 0.0);
}

TEST(EulerProductDist, EmptyProduct) {
    auto d = euler_product_dist(inc({{1, 0.5}, {-1, 0.5}}), 0.5, 0);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.min_value(), 1.0);
}

TEST(EulerProductDist, TwoPeriodEnumeration) {
    auto d = euler_product_dist(inc({{1, 0.5}, {-1, 0.5}}), 0.5, 2);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_NEAR(d.atoms()[0].value, 0.25, 1e-15);
    EXPECT_NEAR(d.atoms()[0].prob, 0.25, 1e-15);
    EXPECT_NEAR(d.atoms()[1].value, 0.75, 1e-15);
    EXPECT_NEAR(d.atoms()[1].prob, 0.5, 1e-15);
    EXPECT_NEAR(d.atoms()[2].value, 2.25, 1e-15);
    EXPECT_NEAR(d.atoms()[2].prob, 0.25, 1e-15);
}

TEST(EulerProductDist, CapIsEnforced) {
    auto r = inc({{1, 0.3}, {0, 0.3}, {-0.5, 0.4}});
    EXPECT_THROW(euler_product_dist(r, 0.3, 13), EnumerationCapExceeded);
    EXPECT_NO_THROW(euler_product_dist(r, 0.3, 12));
    EXPECT_THROW(euler_product_dist(r, 0.3, 3, 26), EnumerationCapExceeded);
}

TEST(EulerProductDist, AllowsNegativeFactors) {
    auto d = euler_product_dist(inc({{1, 0.5}, {-1, 0.5}}), 2.0, 1);
    EXPECT_EQ(d.min_value(), -1.0);
    EXPECT_EQ(d.max_value(), 3.0);
}

class IidProperties : public ::testing::Test {
protected:
    testing::Rng rng{4242};

    IncrementDist random_inc() {
        for (;;) {
            auto d = testing::random_dist(rng, 4, -0.8, 1.0);
            if (d.size() >= 2 && d.min_value() < 0 && d.max_value() > 0) return IncrementDist(d);
        }
    }
};

TEST_F(IidProperties, UnitMean) {
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_inc();
        const double pi = testing::uniform(rng, -3, 3);
        const int n = testing::uniform_int(rng, 0, 4);
        EXPECT_NEAR(mean(euler_product_dist(r, pi, n)), 1.0, 1e-10);
    }
}

TEST_F(IidProperties, InductionStepComposition) {
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_inc();
        const double pi = testing::uniform(rng, -2, 2);
        const int n = testing::uniform_int(rng, 1, 4);
        auto whole = euler_product_dist(r, pi, n);
        auto composed = product_independent(euler_product_dist(r, pi, n - 1), euler_product_dist(r, pi, 1));
        EXPECT_LE(sup_distance(whole, composed), 1e-12);
    }
}

TEST_F(IidProperties, OneFactorRescalingIsConvexDominant) {
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_inc();
        const double pi = testing::uniform(rng, -2, 2);
        const double a = testing::uniform(rng, 1, 5);
        EXPECT_TRUE(check_convex(euler_product_dist(r, pi, 1), euler_product_dist(r, a * pi, 1)).holds);
    }
}

TEST_F(IidProperties, UncenteredProductMean) {
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_inc();
        const double pi = testing::uniform(rng, -0.9, 0.9);
        const int n = testing::uniform_int(rng, 1, 4);
        auto growth = r.law().map([pi](double x) { return 1 + pi * x; });
        auto prod = DiscreteDist::point_mass(1.0);
        for (int i = 0; i < n; ++i) prod = product_independent(prod, growth);
        EXPECT_NEAR(mean(prod), std::pow(1 + pi * r.drift(), n), 1e-10);
    }
}

TEST(CheckEulerOrder, Examples) {
    auto sym = inc({{1, 0.5}, {-1, 0.5}});
    auto same = check_euler_order(sym, 0.4, 0.4, 3);
    EXPECT_TRUE(same.holds);
    EXPECT_EQ(same.min_gap, 0.0);
    EXPECT_TRUE(check_euler_order(sym, 0.3, 0.6, 2).holds);

    auto bin = inc({{1, 0.6}, {-0.5, 0.4}});
    EXPECT_TRUE(check_euler_order(bin, optimal_fraction(bin, 0.9), optimal_fraction(bin, 0.3), 4).holds);
}

TEST(CheckEulerOrder, Preconditions) {
    auto sym = inc({{1, 0.5}, {-1, 0.5}});
    EXPECT_THROW(check_euler_order(sym, 0.5, -0.6, 2), PreconditionViolation);
    EXPECT_THROW(check_euler_order(sym, 0.7, 0.6, 2), PreconditionViolation);
    EXPECT_NO_THROW(check_euler_order(sym, 0.0, 0.6, 2));
}

TEST(McProductSample, ZeroFractionIsPointMass) {
    auto r = inc({{0.1, 0.5}, {-0.08, 0.5}});
    auto s = mc_product_sample(r, 0.0, 20, 1000, 1);
    for (double v : s.values) EXPECT_EQ(v, 1.0);
}

TEST(McProductSample, DeterministicAndShardIndependent) {
    auto r = inc({{0.1, 0.5}, {-0.08, 0.3}, {0.0, 0.2}});
    auto a = mc_product_sample(r, 1.5, 30, 5000, 99, 1);
    auto b = mc_product_sample(r, 1.5, 30, 5000, 99, 4);
    auto c = mc_product_sample(r, 1.5, 30, 5000, 100, 1);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(McProductSample, RequiresEnoughPaths) {
    EXPECT_THROW(mc_product_sample(inc({{0.1, 0.5}, {-0.1, 0.5}}), 1, 5, 999, 1), std::invalid_argument);
}

TEST(McProductSample, MeanWithinFourStandardErrors) {
    testing::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = testing::random_dist(rng, 4, -0.3, 0.4);
        if (d.size() < 2 || d.min_value() >= 0 || d.max_value() <= 0) continue;
        IncrementDist r(d);
        auto s = mc_product_sample(r, testing::uniform(rng, -1.5, 1.5), testing::uniform_int(rng, 1, 20), 4000,
                                   static_cast<std::uint64_t>(trial));
        EXPECT_LE(std::abs(s.mean() - 1.0), 4 * s.mean_std_error() + 1e-12);
    }
}

TEST(CallEstimate, MatchesExactValueForLargeSample) {
    auto r = inc({{0.1, 0.5}, {-0.08, 0.5}});
    auto s = mc_product_sample(r, 2.0, 6, 200000, 3);
    auto exact = euler_product_dist(r, 2.0, 6);
    for (double k : {0.8, 1.0, 1.2}) {
        auto est = call_estimate(s, k);
        EXPECT_LE(std::abs(est.value - call_value(exact, k)), 4 * est.std_error);
    }
}

TEST(CheckEulerOrderMc, HoldsForOrderedFractions) {
    auto r = inc({{0.1, 0.5}, {-0.08, 0.5}});
    auto rep = check_euler_order_mc(r, optimal_fraction(r, 0.9), optimal_fraction(r, 0.3), 20, 20000, 17, 2);
    EXPECT_TRUE(rep.verdict.holds);
    EXPECT_TRUE(rep.verdict.statistical);
    EXPECT_FALSE(rep.curve.empty());
}

}  // namespace
}  // namespace riskorder
