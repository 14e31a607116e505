#include "riskorder/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskorder/scalar_opt.hpp"

namespace riskorder {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double crra_term(double z, double p) {
    return p == 1.0 ? std::log(z) : std::pow(z, 1.0 - p) / (1.0 - p);
}

double log_sum_exp(std::span<const double> xs) {
    const double m = *std::max_element(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Minimizes log sum_c exp(log_weight_c - gamma * theta * dS_c) over theta.
// Returns (theta, minimum).
std::pair<double, double> optimal_exponential_holding(std::span<const double> log_weights,
                                                      std::span<const double> price_moves,
                                                      double gamma) {
    const std::size_t n = log_weights.size();
    std::vector<double> expo(n);
    auto exponents = [&](double theta) {
        for (std::size_t i = 0; i < n; ++i) expo[i] = log_weights[i] - gamma * theta * price_moves[i];
    };
    // Softmax moments of the price moves at theta.
    auto moments = [&](double theta) {
        exponents(theta);
        const double m = *std::max_element(expo.begin(), expo.end());
        double z = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::exp(expo[i] - m);
            z += w;
            m1 += w * price_moves[i];
            m2 += w * price_moves[i] * price_moves[i];
        }
        m1 /= z;
        m2 /= z;
        return std::pair{m1, m2 - m1 * m1};
    };

    ConcaveObjective obj;
    obj.value = [&](double theta) {
        exponents(theta);
        return -log_sum_exp(expo);
    };
    obj.slope = [&](double theta) { return gamma * moments(theta).first; };
    obj.curvature = [&](double theta) { return -gamma * gamma * moments(theta).second; };

    const auto opt = maximize_concave(obj, -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
    return {opt.argmax, -opt.value};
}

void require_positive_capital(const Utility& u, double x0) {
    if (!std::isfinite(x0)) throw std::invalid_argument("initial capital must be finite");
    if (u.domain() == UtilityDomain::positive_halfline && !(x0 > 0.0))
        throw std::invalid_argument("initial capital must be positive for " + u.describe());
}

}  // namespace

ControlKind control_kind_for(const Utility& u) {
    return u.kind() == UtilityKind::exponential ? ControlKind::amount : ControlKind::fraction;
}

double optimal_crra_fraction(std::span<const double> weights, std::span<const double> returns, double p) {
    if (weights.size() != returns.size() || weights.empty())
        throw std::invalid_argument("weights and returns must be non-empty and of equal length");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool any_move = false;
    for (double r : returns) {
        if (std::abs(r) <= kZeroReturnTolerance) continue;
        any_move = true;
        if (r > 0.0)
            lo = std::max(lo, -1.0 / r);
        else
            hi = std::min(hi, -1.0 / r);
    }
    if (!any_move) return 0.0;
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw ArbitrageError("returns do not take both signs; the fraction problem is unbounded");

    ConcaveObjective obj;
    obj.value = [&](double pi) {
        double s = 0.0;
        for (std::size_t i = 0; i < returns.size(); ++i) s += weights[i] * crra_term(1.0 + pi * returns[i], p);
        return s;
    };
    obj.slope = [&](double pi) {
        double s = 0.0;
        for (std::size_t i = 0; i < returns.size(); ++i)
            s += weights[i] * returns[i] * std::pow(1.0 + pi * returns[i], -p);
        return s;
    };
    obj.curvature = [&](double pi) {
        double s = 0.0;
        for (std::size_t i = 0; i < returns.size(); ++i)
            s -= p * weights[i] * returns[i] * returns[i] * std::pow(1.0 + pi * returns[i], -p - 1.0);
        return s;
    };
    return maximize_concave(obj, lo, hi).argmax;
}

DiscreteDist terminal_distribution(const EventTree& tree, std::span<const double> wealth) {
    std::vector<Atom> atoms;
    atoms.reserve(tree.leaves().size());
    for (auto leaf : tree.leaves()) atoms.push_back({wealth[leaf], tree.path_probability(leaf)});
    return DiscreteDist::from_atoms(std::move(atoms));
}

Solution solve_dp(const EventTree& tree, const Utility& u, double x0) {
    require_positive_capital(u, x0);
    require_arbitrage_free(tree);

    const std::size_t n = tree.size();
    Solution sol;
    sol.control_kind = control_kind_for(u);
    sol.control.assign(n, kNaN);

    // Continuation factor per node: v for power (value = x^(1-p)/(1-p) v),
    // additive constant a for log (value = ln x + a), log w for exponential
    // (value = -exp(-gamma x) w).
    std::vector<double> factor(n, u.kind() == UtilityKind::power ? 1.0 : 0.0);
    const double p = u.parameter();

    std::vector<double> weights, moves;
    for (std::size_t idx = n; idx-- > 0;) {
        auto kids = tree.children(idx);
        if (kids.empty()) continue;
        weights.clear();
        moves.clear();
        switch (u.kind()) {
            case UtilityKind::power:
            case UtilityKind::log: {
                for (auto c : kids) {
                    weights.push_back(tree.node(c).prob * (u.kind() == UtilityKind::power ? factor[c] : 1.0));
                    moves.push_back(tree.step_return(c));
                }
                const double pi = optimal_crra_fraction(weights, moves, p);
                double f = 0.0;
                for (std::size_t k = 0; k < kids.size(); ++k) {
                    const double growth = 1.0 + pi * moves[k];
                    if (u.kind() == UtilityKind::power)
                        f += weights[k] * std::pow(growth, 1.0 - p);
                    else
                        f += tree.node(kids[k]).prob * (std::log(growth) + factor[kids[k]]);
                }
                sol.control[idx] = pi;
                factor[idx] = f;
                break;
            }
            case UtilityKind::exponential: {
                bool any_move = false;
                for (auto c : kids) {
                    weights.push_back(std::log(tree.node(c).prob) + factor[c]);
                    const double ds = tree.node(c).price - tree.node(idx).price;
                    moves.push_back(ds);
                    if (std::abs(tree.step_return(c)) > kZeroReturnTolerance) any_move = true;
                }
                if (!any_move) {
                    sol.control[idx] = 0.0;
                    factor[idx] = log_sum_exp(weights);
                } else {
                    auto [theta, lw] = optimal_exponential_holding(weights, moves, p);
                    sol.control[idx] = theta;
                    factor[idx] = lw;
                }
                break;
            }
        }
    }

    sol.wealth.assign(n, 0.0);
    sol.wealth[0] = x0;
    for (std::size_t idx = 1; idx < n; ++idx) {
        const std::size_t par = *tree.parent(idx);
        const double ctl = sol.control[par];
        if (sol.control_kind == ControlKind::fraction)
            sol.wealth[idx] = sol.wealth[par] * (1.0 + ctl * tree.step_return(idx));
        else
            sol.wealth[idx] = sol.wealth[par] + ctl * (tree.node(idx).price - tree.node(par).price);
    }

    switch (u.kind()) {
        case UtilityKind::power: sol.value = std::pow(x0, 1.0 - p) / (1.0 - p) * factor[0]; break;
        case UtilityKind::log: sol.value = std::log(x0) + factor[0]; break;
        case UtilityKind::exponential: sol.value = -std::exp(-p * x0 + factor[0]); break;
    }
    sol.terminal = terminal_distribution(tree, sol.wealth);
    return sol;
}

Replication replicate(const EventTree& tree, const EmmDensity& emm, std::span<const double> leaf_wealth,
                      ControlKind kind) {
    const auto& leaves = tree.leaves();
    if (leaf_wealth.size() != leaves.size())
        throw std::invalid_argument("one terminal wealth per leaf is required");

    const std::size_t n = tree.size();
    Replication rep;
    rep.wealth.assign(n, 0.0);
    rep.control.assign(n, kNaN);
    for (std::size_t k = 0; k < leaves.size(); ++k) rep.wealth[leaves[k]] = leaf_wealth[k];

    for (std::size_t idx = n; idx-- > 0;) {
        auto kids = tree.children(idx);
        if (kids.empty()) continue;
        if (kids.size() > 2)
            throw IncompleteMarket("claim cannot be replicated at node " + std::to_string(tree.node(idx).id));
        double w = 0.0;
        for (auto c : kids) w += emm.branch_q[c] * rep.wealth[c];
        rep.wealth[idx] = w;
        if (kids.size() == 1) {
            rep.control[idx] = 0.0;
            continue;
        }
        const double dw = rep.wealth[kids[0]] - rep.wealth[kids[1]];
        if (kind == ControlKind::amount) {
            rep.control[idx] = dw / (tree.node(kids[0]).price - tree.node(kids[1]).price);
        } else {
            if (!(w > 0.0))
                throw std::domain_error("fraction hedge needs positive wealth at node " +
                                        std::to_string(tree.node(idx).id));
            rep.control[idx] = dw / (w * (tree.step_return(kids[0]) - tree.step_return(kids[1])));
        }
    }
    return rep;
}

Solution solve_complete_dual(const EventTree& tree, const Utility& u, double x0) {
    require_positive_capital(u, x0);
    const EmmDensity emm = unique_emm(tree);
    const auto& leaves = tree.leaves();

    std::vector<double> q_mass, dens;
    for (auto leaf : leaves) {
        dens.push_back(emm.leaf_density(leaf));
        q_mass.push_back(tree.path_probability(leaf) * emm.leaf_density(leaf));
    }
    auto budget = [&](double log_y) {
        const double y = std::exp(log_y);
        double b = 0.0;
        for (std::size_t k = 0; k < leaves.size(); ++k) b += q_mass[k] * u.inverse_marginal(y * dens[k]);
        return b;
    };

    // budget is strictly decreasing in y; bracket the root geometrically.
    const double t0 = std::log(u.marginal(x0));
    double lo = t0, hi = t0;
    double step = 1.0;
    for (int i = 0; budget(lo) < x0; ++i) {
        if (i > 200) throw std::runtime_error("budget equation: failed to bracket the multiplier");
        lo -= step;
        step *= 2.0;
    }
    step = 1.0;
    for (int i = 0; budget(hi) > x0; ++i) {
        if (i > 200) throw std::runtime_error("budget equation: failed to bracket the multiplier");
        hi += step;
        step *= 2.0;
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (budget(mid) > x0)
            lo = mid;
        else
            hi = mid;
    }
    const double log_y = 0.5 * (lo + hi);
    const double y = std::exp(log_y);

    std::vector<double> leaf_wealth;
    leaf_wealth.reserve(leaves.size());
    for (std::size_t k = 0; k < leaves.size(); ++k) leaf_wealth.push_back(u.inverse_marginal(y * dens[k]));

    auto rep = replicate(tree, emm, leaf_wealth, control_kind_for(u));

    Solution sol;
    sol.control_kind = control_kind_for(u);
    sol.control = std::move(rep.control);
    sol.wealth = std::move(rep.wealth);
    sol.multiplier = y;
    double value = 0.0;
    for (std::size_t k = 0; k < leaves.size(); ++k)
        value += tree.path_probability(leaves[k]) * u.evaluate(leaf_wealth[k]);
    sol.value = value;
    sol.terminal = terminal_distribution(tree, sol.wealth);
    return sol;
}

}  // namespace riskorder
