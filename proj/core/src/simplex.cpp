#include "riskorder/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskorder {

FeasibilityResult find_feasible_point(const EqualitySystem& sys, double pivot_tol) {
    const std::size_t m = sys.rows;
    const std::size_t n = sys.cols;
    if (sys.a.size() != m * n || sys.b.size() != m)
        throw std::invalid_argument("equality system dimensions do not match");

    // Tableau columns: n structural, m artificial, 1 right-hand side.
    const std::size_t width = n + m + 1;
    const std::size_t rhs = n + m;
    std::vector<double> t(m * width, 0.0);
    auto cell = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = sys.b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) cell(r, c) = sign * sys.at(r, c);
        cell(r, n + r) = 1.0;
        cell(r, rhs) = sign * sys.b[r];
        basis[r] = n + r;
    }

    // Reduced costs of the phase-1 objective (sum of artificials).
    std::vector<double> cost(width, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) cost[c] -= cell(r, c);
    for (std::size_t r = 0; r < m; ++r) cost[rhs] -= cell(r, rhs);

    FeasibilityResult result;
    for (;;) {
        std::size_t enter = width;
        for (std::size_t c = 0; c < rhs; ++c) {
            if (cost[c] < -pivot_tol) {
                enter = c;
                break;
            }
        }
        if (enter == width) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double coef = cell(r, enter);
            if (coef <= pivot_tol) continue;
            const double ratio = cell(r, rhs) / coef;
            if (ratio < best_ratio - 1e-15 ||
                (leave != m && std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                best_ratio = ratio;
                leave = r;
            }
        }
        // Phase 1 is bounded below by zero, so an unbounded ray means the
        // reduced cost is numerical noise: retire the column.
        if (leave == m) {
            cost[enter] = 0.0;
            continue;
        }

        const double pivot = cell(leave, enter);
        for (std::size_t c = 0; c < width; ++c) cell(leave, c) /= pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = cell(r, enter);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < width; ++c) cell(r, c) -= f * cell(leave, c);
        }
        const double f = cost[enter];
        for (std::size_t c = 0; c < width; ++c) cost[c] -= f * cell(leave, c);
        basis[leave] = enter;
        ++result.pivots;
    }

    result.z.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const double v = std::max(0.0, cell(r, rhs));
        if (basis[r] < n)
            result.z[basis[r]] = v;
        else
            result.infeasibility += v;
    }
    return result;
}

}  // namespace riskorder
