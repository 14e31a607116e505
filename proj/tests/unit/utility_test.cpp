#include <gtest/gtest.h>

#include <cmath>

#include "riskorder/utility.hpp"
#include "support/random_models.hpp"

namespace riskorder {
namespace {

TEST(Utility, Evaluate) {
    EXPECT_DOUBLE_EQ(Utility::power(0.5).evaluate(4.0), 4.0);
    EXPECT_DOUBLE_EQ(Utility::log().evaluate(1.0), 0.0);
    EXPECT_DOUBLE_EQ(Utility::exponential(1.0).evaluate(0.0), -1.0);
}

TEST(Utility, MarginalAndInverse) {
    auto u = Utility::power(0.9);
    EXPECT_DOUBLE_EQ(u.marginal(2.0), std::pow(2.0, -0.9));
    EXPECT_NEAR(u.inverse_marginal(u.marginal(2.0)), 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(Utility::log().inverse_marginal(0.25), 4.0);
    EXPECT_DOUBLE_EQ(Utility::exponential(2.0).marginal(0.0), 2.0);
}

TEST(Utility, AbsoluteRiskAversion) {
    EXPECT_NEAR(Utility::power(0.9).ara(3.0), 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(Utility::exponential(0.7).ara(-12.0), 0.7);
    EXPECT_DOUBLE_EQ(Utility::exponential(0.7).ara(5.0), 0.7);
    EXPECT_DOUBLE_EQ(Utility::log().ara(2.0), 0.5);
}

TEST(Utility, PowerOneIsLog) {
    EXPECT_EQ(Utility::power(1.0).kind(), UtilityKind::log);
    EXPECT_EQ(Utility::power(1.0), Utility::log());
}

TEST(Utility, DomainsAndParameterChecks) {
    EXPECT_EQ(Utility::power(2).domain(), UtilityDomain::positive_halfline);
    EXPECT_EQ(Utility::log().domain(), UtilityDomain::positive_halfline);
    EXPECT_EQ(Utility::exponential(1).domain(), UtilityDomain::whole_real_line);
    EXPECT_THROW(Utility::power(0.0), std::invalid_argument);
    EXPECT_THROW(Utility::power(-1.0), std::invalid_argument);
    EXPECT_THROW(Utility::exponential(0.0), std::invalid_argument);
    EXPECT_THROW(Utility::power(0.5).evaluate(-1.0), UtilityDomainError);
    EXPECT_THROW(Utility::log().marginal(0.0), UtilityDomainError);
    EXPECT_THROW(Utility::power(0.5).ara(0.0), UtilityDomainError);
    EXPECT_THROW(Utility::exponential(1).inverse_marginal(0.0), UtilityDomainError);
    EXPECT_NO_THROW(Utility::exponential(1).evaluate(-3.0));
}

TEST(MoreRiskAverse, Examples) {
    EXPECT_EQ(more_risk_averse(Utility::power(0.9), Utility::power(0.3)), RiskComparison::more);
    EXPECT_EQ(more_risk_averse(Utility::power(0.3), Utility::power(0.9)), RiskComparison::less);
    EXPECT_EQ(more_risk_averse(Utility::exponential(2), Utility::exponential(1)), RiskComparison::more);
    EXPECT_EQ(more_risk_averse(Utility::power(0.5), Utility::exponential(1)), RiskComparison::incomparable);
    EXPECT_EQ(more_risk_averse(Utility::exponential(1), Utility::log()), RiskComparison::incomparable);
    EXPECT_EQ(more_risk_averse(Utility::power(2.0), Utility::log()), RiskComparison::more);
    EXPECT_EQ(more_risk_averse(Utility::log(), Utility::power(2.0)), RiskComparison::less);
}

std::vector<Utility> sample_utilities(testing::Rng& rng) {
    return {Utility::power(testing::uniform(rng, 0.05, 0.95)), Utility::power(testing::uniform(rng, 1.05, 6.0)),
            Utility::log(), Utility::exponential(testing::uniform(rng, 0.1, 3.0))};
}

double sample_point(testing::Rng& rng, const Utility& u) {
    return u.domain() == UtilityDomain::positive_halfline ? std::exp(testing::uniform(rng, -3.0, 3.0))
                                                          : testing::uniform(rng, -3.0, 3.0);
}

TEST(UtilityProperties, MarginalStrictlyDecreasing) {
    testing::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        for (const auto& u : sample_utilities(rng)) {
            double a = sample_point(rng, u), b = sample_point(rng, u);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            EXPECT_GT(u.marginal(a), u.marginal(b)) << u.describe();
        }
    }
}

TEST(UtilityProperties, InverseMarginalRoundTrip) {
    testing::Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        for (const auto& u : sample_utilities(rng)) {
            const double x = sample_point(rng, u);
            EXPECT_NEAR(u.inverse_marginal(u.marginal(x)), x, 1e-12 * std::max(1.0, std::abs(x)))
                << u.describe();
        }
    }
}

TEST(UtilityProperties, AraMatchesFiniteDifferences) {
    testing::Rng rng(13);
    const double h = 1e-5;
    for (int trial = 0; trial < 200; ++trial) {
        for (const auto& u : sample_utilities(rng)) {
            double x = sample_point(rng, u);
            if (u.domain() == UtilityDomain::positive_halfline) x = std::max(x, 0.2);
            const double d1 = (u.evaluate(x + h) - u.evaluate(x - h)) / (2 * h);
            // Second difference of U' keeps the cancellation error well
            // below the 1e-5 budget.
            const double d2 = (u.marginal(x + h) - u.marginal(x - h)) / (2 * h);
            EXPECT_NEAR(u.ara(x), -d2 / d1, 1e-5 * std::max(1.0, u.ara(x))) << u.describe() << " x=" << x;
        }
    }
}

TEST(UtilityProperties, MoreRiskAverseMeansIncreasingMarginalRatio) {
    testing::Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        auto us = sample_utilities(rng);
        const auto& m = us[static_cast<std::size_t>(testing::uniform_int(rng, 0, 3))];
        const auto& l = us[static_cast<std::size_t>(testing::uniform_int(rng, 0, 3))];
        if (more_risk_averse(m, l) != RiskComparison::more) continue;
        double prev = -1.0;
        for (double x = 0.05; x < 50.0; x *= 1.3) {
            const double ratio = l.marginal(x) / m.marginal(x);
            EXPECT_GE(ratio, prev * (1 - 1e-12)) << m.describe() << " vs " << l.describe();
            prev = ratio;
        }
    }
}

}  // namespace
}  // namespace riskorder
