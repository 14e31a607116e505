#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "riskorder/distribution.hpp"

namespace riskorder {

enum class Relation {
    monotone_convex,   ///< E[c(X)] <= E[c(Y)] for increasing convex c
    convex,            ///< E[c(X)] <= E[c(Y)] for all convex c
    centered_convex,   ///< X - E[X] <= Y - E[Y] in the convex order
};

std::string_view to_string(Relation r);
Relation relation_from_string(std::string_view s);

/// Outcome of a dominance check of X against Y.
struct OrderVerdict {
    Relation relation = Relation::monotone_convex;
    bool holds = false;
    /// Largest kink whose gap E[(Y-K)^+] - E[(X-K)^+] is within tolerance of
    /// min_gap; empty only when the K -> -inf limit (the mean comparison)
    /// beats every kink.
    std::optional<double> witness_strike;
    double min_gap = 0.0;
    double mean_gap = 0.0;
    double tolerance = 0.0;
    /// Set when the verdict holds but the binding gap is within tolerance of zero.
    bool boundary = false;
    /// Set for Monte Carlo verdicts (gap >= -3 standard errors rule).
    bool statistical = false;
};

/// 1e-9 scaled by max(1, |E[X]|, |E[Y]|).
double default_tolerance(const DiscreteDist& x, const DiscreteDist& y);

/// Strikes at which the call gap can have a kink: the union of both supports.
std::vector<double> kink_strikes(const DiscreteDist& x, const DiscreteDist& y);

OrderVerdict check_mc(const DiscreteDist& x, const DiscreteDist& y,
                      std::optional<double> tol = std::nullopt);
OrderVerdict check_convex(const DiscreteDist& x, const DiscreteDist& y,
                          std::optional<double> tol = std::nullopt);
OrderVerdict check_centered_convex(const DiscreteDist& x, const DiscreteDist& y,
                                   std::optional<double> tol = std::nullopt);
OrderVerdict check(Relation r, const DiscreteDist& x, const DiscreteDist& y,
                   std::optional<double> tol = std::nullopt);

struct GapPoint {
    double strike;
    double call_x;
    double call_y;
    double gap;
};

/// Call values and gap at every kink plus `fill` evenly spaced strikes
/// across the joint support; sorted by strike, duplicates removed.
std::vector<GapPoint> call_gap_curve(const DiscreteDist& x, const DiscreteDist& y, int fill = 50);

class InfeasibleCoupling : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CouplingCell {
    double x;
    double y;
    double mass;
};

/// Joint law of (X, Y) with E[Y | X] = X + shift.
struct Coupling {
    std::vector<CouplingCell> joint;
    double shift = 0.0;

    DiscreteDist x_marginal() const;
    DiscreteDist y_marginal() const;
    /// max over x of |E[Y | X = x] - x - shift|
    double conditional_mean_residual() const;
};

/**
 * Builds a joint law of (X, Y) with the given marginals such that
 * Y = X + (E[Y] - E[X]) + noise with E[noise | X] = 0.
 *
 * Requires X + (E[Y] - E[X]) <= Y in the convex order. The joint masses are
 * found as a feasible point of the marginal and conditional-mean equality
 * system by a dense phase-1 simplex.
 *
 * Throws InfeasibleCoupling when the order check fails or the solved
 * system misses the constraints by more than `tol`.
 */
Coupling strassen_coupling(const DiscreteDist& x, const DiscreteDist& y, double tol = 1e-8);

}  // namespace riskorder
