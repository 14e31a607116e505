#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riskorder/distribution.hpp"
#include "riskorder/order.hpp"

namespace riskorder {

class EnumerationCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Law of one period's arithmetic return. Must put mass on both a negative
/// and a positive value.
class IncrementDist {
public:
    explicit IncrementDist(DiscreteDist law);

    const DiscreteDist& law() const noexcept { return law_; }
    double drift() const noexcept { return drift_; }

private:
    DiscreteDist law_;
    double drift_;
};

/// Constant risky fraction maximizing E[u_p(1 + pi R)] for the CRRA utility
/// with relative risk aversion p (log at p == 1).
double optimal_fraction(const IncrementDist& inc, double p);

/// Law of one centered factor 1 + pi (R - b).
DiscreteDist euler_factor(const IncrementDist& inc, double pi);

/// Exact law of prod_{i<=N} (1 + pi (R_i - b)) by enumeration. Factors may
/// be negative. Throws EnumerationCapExceeded when |support|^N > cap.
DiscreteDist euler_product_dist(const IncrementDist& inc, double pi, int periods,
                                std::size_t cap = kDefaultEnumerationCap);

/// Checks the convex order of the two Euler products. Throws
/// PreconditionViolation unless pi_more and pi_less share a sign (zero
/// counts as either) and |pi_more| <= |pi_less|.
OrderVerdict check_euler_order(const IncrementDist& inc, double pi_more, double pi_less, int periods,
                               std::optional<double> tol = std::nullopt,
                               std::size_t cap = kDefaultEnumerationCap);

/// Simulated Euler products, one value per path in path order.
struct McSample {
    std::vector<double> values;

    DiscreteDist law() const;
    double mean() const;
    double mean_std_error() const;
};

struct CallEstimate {
    double value;
    double std_error;
};

/// Path i draws its increments from a generator seeded by (seed, i), so the
/// sample is identical for any number of workers, and two calls with the
/// same seed share increments path by path.
McSample mc_product_sample(const IncrementDist& inc, double pi, int periods, std::size_t paths,
                           std::uint64_t seed, unsigned workers = 1);

CallEstimate call_estimate(const McSample& s, double strike);

struct McGapPoint {
    double strike;  ///< centered strike K - 1
    double call_x;
    double call_y;
    double gap;
    double std_error;  ///< of the paired gap
};

struct StatisticalOrderReport {
    OrderVerdict verdict;
    std::vector<McGapPoint> curve;
};

/// Number of standard errors a sampled gap may fall below zero.
inline constexpr double kStatisticalSigmas = 3.0;

/**
 * Monte Carlo check that the centered Euler product for pi_more is below
 * the one for pi_less in the convex order. Both samples share increments
 * path by path; strikes are the 1st..99th percentiles of the pooled
 * sample. Holds when every gap is at least -3 standard errors of the
 * paired difference. Both products have mean one exactly, so centering
 * shifts strikes by one.
 */
StatisticalOrderReport check_euler_order_mc(const IncrementDist& inc, double pi_more, double pi_less,
                                            int periods, std::size_t paths, std::uint64_t seed,
                                            unsigned workers = 1);

}  // namespace riskorder
