#include "riskorder/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskorder {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Grows a step from `start` in the direction of ascent until the slope
// changes sign or the finite end is reached.
double expand(const ConcaveObjective& f, double start, double limit, double direction) {
    double step = 1.0;
    double x = start;
    for (int i = 0; i < 2000; ++i) {
        double next = x + direction * step;
        if (std::isfinite(limit) && (direction > 0 ? next >= limit : next <= limit)) return limit;
        const double s = f.slope(next);
        if (!std::isfinite(s) || s * direction <= 0.0) return next;
        x = next;
        step *= 2.0;
    }
    throw std::runtime_error("objective appears unbounded: no bracket for the maximum");
}

}  // namespace

ScalarOptimum maximize_concave(const ConcaveObjective& f, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("empty optimization interval");
    const double outer_lo = lo, outer_hi = hi;

    if (std::isfinite(lo) && std::isfinite(hi)) {
        const double delta = 1e-12 * (hi - lo);
        lo += delta;
        hi -= delta;
    } else {
        double anchor = 0.0;
        if (std::isfinite(lo)) anchor = lo + 1.0;
        if (std::isfinite(hi)) anchor = std::min(anchor, hi - 1.0);
        if (std::isfinite(lo) && anchor <= lo) anchor = 0.5 * (lo + hi);
        const double s = f.slope(anchor);
        if (s > 0.0) {
            lo = anchor;
            hi = expand(f, anchor, hi, +1.0);
        } else {
            hi = anchor;
            lo = expand(f, anchor, lo, -1.0);
        }
        const double delta = 1e-12 * (hi - lo);
        lo += delta;
        hi -= delta;
    }

    int iterations = 0;

    // Golden-section search down to a modest bracket; the value function is
    // too flat near the optimum to go much further.
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f.value(c), fd = f.value(d);
    while (b - a > 1e-6 * (hi - lo) && iterations < 200) {
        ++iterations;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f.value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f.value(d);
        }
    }

    // Bracket the root of the slope, widening back to the full interval if
    // the golden-section bracket was misled by rounding or the maximum sits
    // inside the margin next to a finite end.
    if (f.slope(a) <= 0.0) a = lo;
    if (f.slope(b) >= 0.0) b = hi;
    if (f.slope(a) <= 0.0 && std::isfinite(outer_lo)) a = outer_lo;
    if (f.slope(b) >= 0.0 && std::isfinite(outer_hi)) b = outer_hi;
    const double s_lo = f.slope(a);
    const double s_hi = f.slope(b);
    if (s_lo <= 0.0) return {a, f.value(a), iterations};
    if (s_hi >= 0.0) return {b, f.value(b), iterations};

    double x = 0.5 * (a + b);
    for (int i = 0; i < 200; ++i) {
        ++iterations;
        const double s = f.slope(x);
        if (s == 0.0) break;
        if (s > 0.0)
            a = x;
        else
            b = x;
        const double curv = f.curvature(x);
        double next = x - s / curv;
        if (!(next > a && next < b) || !std::isfinite(next)) next = 0.5 * (a + b);
        const double scale = std::max(1.0, std::abs(x));
        if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * scale ||
            b - a <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            x = next;
            break;
        }
        x = next;
    }
    return {x, f.value(x), iterations};
}

}  // namespace riskorder
