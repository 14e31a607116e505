#include "riskorder/order.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "riskorder/simplex.hpp"

namespace riskorder {

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::monotone_convex: return "mc";
        case Relation::convex: return "c";
        case Relation::centered_convex: return "centered-c";
    }
    return "?";
}

Relation relation_from_string(std::string_view s) {
    if (s == "mc") return Relation::monotone_convex;
    if (s == "c") return Relation::convex;
    if (s == "centered-c") return Relation::centered_convex;
    throw std::invalid_argument("unknown relation '" + std::string(s) + "' (expected mc, c or centered-c)");
}

double default_tolerance(const DiscreteDist& x, const DiscreteDist& y) {
    return 1e-9 * std::max({1.0, std::abs(mean(x)), std::abs(mean(y))});
}

std::vector<double> kink_strikes(const DiscreteDist& x, const DiscreteDist& y) {
    std::vector<double> k = x.support();
    auto sy = y.support();
    k.insert(k.end(), sy.begin(), sy.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

namespace {

// The call gap is piecewise linear in the strike with kinks only at support
// points, and equals the mean gap for strikes below both supports. Its
// infimum is therefore attained either in that limit or at a kink.
OrderVerdict scan_gaps(Relation rel, const DiscreteDist& x, const DiscreteDist& y, double tol) {
    OrderVerdict v;
    v.relation = rel;
    v.tolerance = tol;
    v.mean_gap = mean(y) - mean(x);
    v.min_gap = v.mean_gap;
    const auto strikes = kink_strikes(x, y);
    std::vector<double> gaps;
    gaps.reserve(strikes.size());
    for (double k : strikes) {
        gaps.push_back(call_value(y, k) - call_value(x, k));
        v.min_gap = std::min(v.min_gap, gaps.back());
    }
    // The gap is often flat at its minimum; report the largest strike that
    // attains it within tolerance. Left of all kinks the gap is the mean gap,
    // so the mean limit is only reported when no kink comes close.
    for (std::size_t i = strikes.size(); i-- > 0;) {
        if (gaps[i] <= v.min_gap + tol) {
            v.witness_strike = strikes[i];
            break;
        }
    }
    v.holds = v.min_gap >= -tol;
    if (rel != Relation::monotone_convex) v.holds = v.holds && std::abs(v.mean_gap) <= tol;
    v.boundary = v.holds && v.min_gap < tol;
    return v;
}

}  // namespace

OrderVerdict check_mc(const DiscreteDist& x, const DiscreteDist& y, std::optional<double> tol) {
    return scan_gaps(Relation::monotone_convex, x, y, tol.value_or(default_tolerance(x, y)));
}

OrderVerdict check_convex(const DiscreteDist& x, const DiscreteDist& y, std::optional<double> tol) {
    return scan_gaps(Relation::convex, x, y, tol.value_or(default_tolerance(x, y)));
}

OrderVerdict check_centered_convex(const DiscreteDist& x, const DiscreteDist& y,
                                   std::optional<double> tol) {
    const double t = tol.value_or(default_tolerance(x, y));
    auto v = scan_gaps(Relation::convex, center(x), center(y), t);
    v.relation = Relation::centered_convex;
    return v;
}

OrderVerdict check(Relation r, const DiscreteDist& x, const DiscreteDist& y,
                   std::optional<double> tol) {
    switch (r) {
        case Relation::monotone_convex: return check_mc(x, y, tol);
        case Relation::convex: return check_convex(x, y, tol);
        case Relation::centered_convex: return check_centered_convex(x, y, tol);
    }
    throw std::invalid_argument("unknown relation");
}

std::vector<GapPoint> call_gap_curve(const DiscreteDist& x, const DiscreteDist& y, int fill) {
    std::vector<double> strikes = kink_strikes(x, y);
    const double lo = strikes.front();
    const double hi = strikes.back();
    if (fill > 1 && hi > lo) {
        for (int i = 0; i < fill; ++i) strikes.push_back(lo + (hi - lo) * i / (fill - 1));
    }
    std::sort(strikes.begin(), strikes.end());
    strikes.erase(std::unique(strikes.begin(), strikes.end()), strikes.end());

    std::vector<GapPoint> out;
    out.reserve(strikes.size());
    for (double k : strikes) {
        const double cx = call_value(x, k);
        const double cy = call_value(y, k);
        out.push_back({k, cx, cy, cy - cx});
    }
    return out;
}

DiscreteDist Coupling::x_marginal() const {
    std::vector<Atom> a;
    for (const auto& c : joint) a.push_back({c.x, c.mass});
    return DiscreteDist::from_weights(std::move(a));
}

DiscreteDist Coupling::y_marginal() const {
    std::vector<Atom> a;
    for (const auto& c : joint) a.push_back({c.y, c.mass});
    return DiscreteDist::from_weights(std::move(a));
}

double Coupling::conditional_mean_residual() const {
    std::map<double, std::pair<double, double>> by_x;  // x -> (mass, sum mass*y)
    for (const auto& c : joint) {
        auto& [m, my] = by_x[c.x];
        m += c.mass;
        my += c.mass * c.y;
    }
    double worst = 0.0;
    for (const auto& [x, acc] : by_x)
        worst = std::max(worst, std::abs(acc.second / acc.first - x - shift));
    return worst;
}

Coupling strassen_coupling(const DiscreteDist& x, const DiscreteDist& y, double tol) {
    const double shift_amount = mean(y) - mean(x);
    const auto xs = riskorder::shift(x, shift_amount);
    const auto verdict = check_convex(xs, y, default_tolerance(xs, y));
    if (!verdict.holds)
        throw InfeasibleCoupling("no martingale coupling: shifted X is not below Y in the convex order");

    const auto ax = x.atoms();
    const auto ay = y.atoms();
    const std::size_t n = ax.size();
    const std::size_t m = ay.size();

    // Unknowns: mass[i][j] for x-atom i, y-atom j.
    // Rows: n x-marginals, m y-marginals, n conditional means.
    EqualitySystem sys;
    sys.rows = 2 * n + m;
    sys.cols = n * m;
    sys.a.assign(sys.rows * sys.cols, 0.0);
    sys.b.assign(sys.rows, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t col = i * m + j;
            sys.at(i, col) = 1.0;
            sys.at(n + j, col) = 1.0;
            sys.at(n + m + i, col) = ay[j].value - ax[i].value - shift_amount;
        }
        sys.b[i] = ax[i].prob;
    }
    for (std::size_t j = 0; j < m; ++j) sys.b[n + j] = ay[j].prob;

    const auto sol = find_feasible_point(sys);

    Coupling out;
    out.shift = shift_amount;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double mass = sol.z[i * m + j];
            if (mass > 1e-15) out.joint.push_back({ax[i].value, ay[j].value, mass});
        }

    // Residuals of the original equality system.
    double residual = 0.0;
    for (std::size_t r = 0; r < sys.rows; ++r) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < sys.cols; ++c) lhs += sys.at(r, c) * sol.z[c];
        residual = std::max(residual, std::abs(lhs - sys.b[r]));
    }
    if (out.joint.empty() || residual > tol)
        throw InfeasibleCoupling("coupling system residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    return out;
}

}  // namespace riskorder
