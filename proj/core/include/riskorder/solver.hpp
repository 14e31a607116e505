#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riskorder/distribution.hpp"
#include "riskorder/tree_market.hpp"
#include "riskorder/utility.hpp"

namespace riskorder {

/// How a node's control is expressed.
enum class ControlKind {
    fraction,  ///< share pi of current wealth held in the risky asset (power, log)
    amount,    ///< number of risky units theta held (exponential)
};

ControlKind control_kind_for(const Utility& u);

/// Optimal investment on an event tree.
struct Solution {
    ControlKind control_kind = ControlKind::fraction;
    /// Per node, indexed like the tree; NaN at leaves.
    std::vector<double> control;
    /// Per node wealth; wealth[0] is the initial capital.
    std::vector<double> wealth;
    DiscreteDist terminal = DiscreteDist::point_mass(0.0);
    /// Attained expected utility.
    double value = 0.0;
    /// Lagrange multiplier of the budget constraint (dual solver only).
    std::optional<double> multiplier;
};

/**
 * Backward induction with wealth factorization.
 *
 * Power and log controls are risky fractions and do not depend on wealth;
 * each node maximizes sum_c P(c) (1 + pi r_c)^(1-p) v(c) / (1-p) over the
 * open interval where every successor wealth stays positive. Exponential
 * controls are unit holdings that minimize sum_c P(c) exp(-gamma theta dS_c) w(c).
 *
 * Works for incomplete trees. Throws ArbitrageError for trees with a
 * one-step arbitrage and std::invalid_argument for x0 <= 0 with a
 * half-line utility.
 */
Solution solve_dp(const EventTree& tree, const Utility& u, double x0);

/**
 * Complete-market solution from the first-order condition
 * U'(X_T) = y dQ/dP with y fixed by the budget E_Q[X_T] = x0. The
 * multiplier is found by bisection in log y; wealth and controls come from
 * replicate(). Throws IncompleteMarket when the martingale measure is not
 * unique.
 */
Solution solve_complete_dual(const EventTree& tree, const Utility& u, double x0);

struct Replication {
    std::vector<double> wealth;
    std::vector<double> control;
};

/// Q-expectation backwards of a claim paying leaf_wealth[k] at
/// tree.leaves()[k], with the hedge that replicates it.
Replication replicate(const EventTree& tree, const EmmDensity& emm,
                      std::span<const double> leaf_wealth, ControlKind kind);

/// Leaf wealth weighted by path probability, merged into a law.
DiscreteDist terminal_distribution(const EventTree& tree, std::span<const double> wealth);

/// Risky fraction maximizing sum_c w_c u_p(1 + pi r_c) for the CRRA
/// function u_p with relative risk aversion p (log for p == 1). Zero when
/// all returns vanish.
double optimal_crra_fraction(std::span<const double> weights, std::span<const double> returns, double p);

}  // namespace riskorder
