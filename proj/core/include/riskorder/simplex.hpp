#pragma once

#include <optional>
#include <vector>

namespace riskorder {

/// Dense row-major equality system A z = b, z >= 0.
struct EqualitySystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // rows * cols
    std::vector<double> b;  // rows

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct FeasibilityResult {
    std::vector<double> z;
    double infeasibility = 0.0;  ///< phase-1 objective at termination
    std::size_t pivots = 0;
};

/// Phase-1 simplex with one artificial variable per row. Entering and
/// leaving variables follow the smallest-index rule, so the pivot sequence
/// is deterministic and cycling is impossible.
FeasibilityResult find_feasible_point(const EqualitySystem& sys, double pivot_tol = 1e-12);

}  // namespace riskorder
