#pragma once

#include <functional>

namespace riskorder {

/// Smooth strictly concave objective with its first two derivatives.
struct ConcaveObjective {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    std::function<double(double)> curvature;
};

struct ScalarOptimum {
    double argmax;
    double value;
    int iterations;
};

/**
 * Maximizes a strictly concave function over the open interval (lo, hi).
 *
 * The search starts with finite ends pulled in by 1e-12 of the interval
 * width; the Newton stage may go beyond that margin. Infinite ends
 * are replaced by a bracket found by doubling steps along the slope. A
 * golden-section search localizes the maximum and a safeguarded Newton
 * iteration on the slope resolves it to machine precision, which matters
 * when the optimum sits next to an admissibility boundary.
 */
ScalarOptimum maximize_concave(const ConcaveObjective& f, double lo, double hi);

}  // namespace riskorder
