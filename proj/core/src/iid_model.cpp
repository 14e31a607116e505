#include "riskorder/iid_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "riskorder/solver.hpp"

namespace riskorder {

IncrementDist::IncrementDist(DiscreteDist law) : law_(std::move(law)), drift_(mean(law_)) {
    if (law_.size() < 2 || !(law_.min_value() < 0.0) || !(law_.max_value() > 0.0))
        throw PreconditionViolation("increment law needs mass on both negative and positive returns");
}

double optimal_fraction(const IncrementDist& inc, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("relative risk aversion must be positive");
    std::vector<double> w, r;
    for (const auto& a : inc.law().atoms()) {
        w.push_back(a.prob);
        r.push_back(a.value);
    }
    return optimal_crra_fraction(w, r, p);
}

DiscreteDist euler_factor(const IncrementDist& inc, double pi) {
    const double b = inc.drift();
    return inc.law().map([pi, b](double r) { return 1.0 + pi * (r - b); });
}

DiscreteDist euler_product_dist(const IncrementDist& inc, double pi, int periods, std::size_t cap) {
    if (periods < 0) throw std::invalid_argument("number of periods must be non-negative");
    const double atoms = static_cast<double>(inc.law().size());
    if (std::pow(atoms, periods) > static_cast<double>(cap))
        throw EnumerationCapExceeded("enumerating " + std::to_string(periods) + " periods exceeds the cap of " +
                                     std::to_string(cap) + " atoms");
    auto factor = euler_factor(inc, pi);
    auto out = DiscreteDist::point_mass(1.0);
    for (int i = 0; i < periods; ++i) out = product_independent(out, factor);
    return out;
}

namespace {

void require_comparable(double pi_more, double pi_less) {
    if (pi_more * pi_less < 0.0)
        throw PreconditionViolation("risky fractions must share a sign");
    if (std::abs(pi_more) > std::abs(pi_less))
        throw PreconditionViolation("the more risk averse fraction must not exceed the other in magnitude");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

OrderVerdict check_euler_order(const IncrementDist& inc, double pi_more, double pi_less, int periods,
                               std::optional<double> tol, std::size_t cap) {
    require_comparable(pi_more, pi_less);
    return check_convex(euler_product_dist(inc, pi_more, periods, cap),
                        euler_product_dist(inc, pi_less, periods, cap), tol);
}

DiscreteDist McSample::law() const {
    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    const double w = 1.0 / static_cast<double>(values.size());
    for (double v : values) atoms.push_back({v, w});
    return DiscreteDist::from_weights(std::move(atoms));
}

double McSample::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double McSample::mean_std_error() const {
    const double m = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    const double n = static_cast<double>(values.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

McSample mc_product_sample(const IncrementDist& inc, double pi, int periods, std::size_t paths,
                           std::uint64_t seed, unsigned workers) {
    if (paths < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 paths");
    if (periods < 0) throw std::invalid_argument("number of periods must be non-negative");

    const auto atoms = inc.law().atoms();
    std::vector<double> cdf, factor;
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.prob;
        cdf.push_back(acc);
        factor.push_back(1.0 + pi * (a.value - inc.drift()));
    }
    cdf.back() = 1.0;

    McSample out;
    out.values.assign(paths, 1.0);
    auto run = [&](std::size_t begin, std::size_t end) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::size_t path = begin; path < end; ++path) {
            std::mt19937_64 gen(splitmix64(seed ^ splitmix64(path)));
            double x = 1.0;
            for (int t = 0; t < periods; ++t) {
                const double u = unif(gen);
                const auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                x *= factor[std::min(k, factor.size() - 1)];
            }
            out.values[path] = x;
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1) {
        run(0, paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (paths + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(paths, b + chunk);
            if (b < e) pool.emplace_back(run, b, e);
        }
    }
    return out;
}

CallEstimate call_estimate(const McSample& s, double strike) {
    const double n = static_cast<double>(s.values.size());
    double sum = 0.0, sq = 0.0;
    for (double v : s.values) {
        const double c = std::max(v - strike, 0.0);
        sum += c;
        sq += c * c;
    }
    const double m = sum / n;
    const double var = std::max(0.0, (sq - n * m * m) / (n - 1.0));
    return {m, std::sqrt(var / n)};
}

StatisticalOrderReport check_euler_order_mc(const IncrementDist& inc, double pi_more, double pi_less,
                                            int periods, std::size_t paths, std::uint64_t seed,
                                            unsigned workers) {
    require_comparable(pi_more, pi_less);
    const auto xs = mc_product_sample(inc, pi_more, periods, paths, seed, workers);
    const auto ys = mc_product_sample(inc, pi_less, periods, paths, seed, workers);

    std::vector<double> pooled = xs.values;
    pooled.insert(pooled.end(), ys.values.begin(), ys.values.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> strikes;
    for (int q = 1; q <= 99; ++q) {
        const auto pos = static_cast<std::size_t>(q / 100.0 * static_cast<double>(pooled.size() - 1));
        strikes.push_back(pooled[pos]);
    }
    strikes.erase(std::unique(strikes.begin(), strikes.end()), strikes.end());

    StatisticalOrderReport report;
    auto& v = report.verdict;
    v.relation = Relation::centered_convex;
    v.statistical = true;
    v.tolerance = kStatisticalSigmas;
    v.mean_gap = ys.mean() - xs.mean();
    v.holds = true;
    v.min_gap = 0.0;
    double worst_z = 0.0;

    const double n = static_cast<double>(paths);
    for (double k : strikes) {
        double sx = 0.0, sy = 0.0, sd = 0.0, sdd = 0.0;
        for (std::size_t i = 0; i < paths; ++i) {
            const double cx = std::max(xs.values[i] - k, 0.0);
            const double cy = std::max(ys.values[i] - k, 0.0);
            sx += cx;
            sy += cy;
            sd += cy - cx;
            sdd += (cy - cx) * (cy - cx);
        }
        const double gap = sd / n;
        const double se = std::sqrt(std::max(0.0, (sdd - n * gap * gap) / (n - 1.0)) / n);
        report.curve.push_back({k - 1.0, sx / n, sy / n, gap, se});
        if (gap < -kStatisticalSigmas * se) v.holds = false;
        if (gap < v.min_gap) v.min_gap = gap;
        const double z = se > 0.0 ? gap / se : (gap < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
        if (z < worst_z) {
            worst_z = z;
            v.witness_strike = k - 1.0;
        }
    }
    v.boundary = v.holds && worst_z < 0.0;
    return report;
}

}  // namespace riskorder
