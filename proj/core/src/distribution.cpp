#include "riskorder/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace riskorder {

DiscreteDist DiscreteDist::from_atoms(std::vector<Atom> atoms) {
    return normalize(std::move(atoms), true);
}

DiscreteDist DiscreteDist::from_weights(std::vector<Atom> atoms) {
    return normalize(std::move(atoms), false);
}

DiscreteDist DiscreteDist::point_mass(double value) {
    return from_atoms({{value, 1.0}});
}

DiscreteDist DiscreteDist::normalize(std::vector<Atom> atoms, bool check_sum) {
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!std::isfinite(a.value)) throw DistributionError("atom value is not finite");
        if (!std::isfinite(a.prob) || a.prob < 0.0)
            throw DistributionError("atom probability must be finite and non-negative");
        total += a.prob;
    }
    std::erase_if(atoms, [](const Atom& a) { return a.prob == 0.0; });
    if (atoms.empty()) throw DistributionError("distribution has no atoms with positive mass");
    if (check_sum && std::abs(total - 1.0) > kProbabilitySumTolerance)
        throw DistributionError("probabilities sum to " + std::to_string(total) + ", expected 1");

    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });

    // Merge runs of nearby values; the merged value is the probability-weighted
    // average of the run, the run is anchored at its first value.
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    double anchor = 0.0;
    double weighted = 0.0;
    for (const auto& a : atoms) {
        if (!merged.empty() && a.value - anchor <= kAtomMergeTolerance) {
            merged.back().prob += a.prob;
            weighted += a.value * a.prob;
            merged.back().value = weighted / merged.back().prob;
        } else {
            anchor = a.value;
            weighted = a.value * a.prob;
            merged.push_back(a);
        }
    }

    double sum = 0.0;
    for (const auto& a : merged) sum += a.prob;
    // Leave sums that are already 1 up to rounding alone so that written
    // laws read back bit for bit.
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(merged.size());
    if (std::abs(sum - 1.0) > slack)
        for (auto& a : merged) a.prob /= sum;
    return DiscreteDist(std::move(merged));
}

std::vector<double> DiscreteDist::support() const {
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(a.value);
    return out;
}

double mean(const DiscreteDist& d) {
    double m = 0.0;
    for (const auto& a : d.atoms()) m += a.value * a.prob;
    return m;
}

double call_value(const DiscreteDist& d, double strike) {
    double c = 0.0;
    for (const auto& a : d.atoms())
        if (a.value > strike) c += (a.value - strike) * a.prob;
    return c;
}

double put_value(const DiscreteDist& d, double strike) {
    double c = 0.0;
    for (const auto& a : d.atoms())
        if (a.value < strike) c += (strike - a.value) * a.prob;
    return c;
}

DiscreteDist center(const DiscreteDist& d) {
    return shift(d, -mean(d));
}

DiscreteDist shift(const DiscreteDist& d, double c) {
    return d.map([c](double v) { return v + c; });
}

DiscreteDist scale_center(const DiscreteDist& d, double a) {
    if (!(a >= 1.0) || !std::isfinite(a))
        throw DistributionError("scale_center requires a finite factor a >= 1");
    const double m = mean(d);
    return d.map([a, m](double v) { return a * v - (a - 1.0) * m; });
}

DiscreteDist product_independent(const DiscreteDist& d1, const DiscreteDist& d2) {
    std::vector<Atom> out;
    out.reserve(d1.size() * d2.size());
    for (const auto& x : d1.atoms())
        for (const auto& z : d2.atoms()) out.push_back({x.value * z.value, x.prob * z.prob});
    return DiscreteDist::from_weights(std::move(out));
}

namespace {

// Walks both sorted supports and calls f(p1, p2) for every matched value.
template <class F>
void walk_merged(const DiscreteDist& d1, const DiscreteDist& d2, F&& f) {
    auto a = d1.atoms();
    auto b = d2.atoms();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].value < b[j].value - kAtomMergeTolerance)) {
            f(a[i].prob, 0.0);
            ++i;
        } else if (i == a.size() || b[j].value < a[i].value - kAtomMergeTolerance) {
            f(0.0, b[j].prob);
            ++j;
        } else {
            f(a[i].prob, b[j].prob);
            ++i;
            ++j;
        }
    }
}

}  // namespace

double total_variation(const DiscreteDist& d1, const DiscreteDist& d2) {
    double tv = 0.0;
    walk_merged(d1, d2, [&tv](double p, double q) { tv += std::abs(p - q); });
    return 0.5 * tv;
}

double sup_distance(const DiscreteDist& d1, const DiscreteDist& d2, double prob_tol) {
    if (d1.size() != d2.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        const auto& a = d1.atoms()[i];
        const auto& b = d2.atoms()[i];
        if (std::abs(a.prob - b.prob) > prob_tol) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(a.value - b.value));
    }
    return worst;
}

std::string to_string(const DiscreteDist& d) {
    std::ostringstream os;
    os.precision(10);
    os << '{';
    bool first = true;
    for (const auto& a : d.atoms()) {
        if (!first) os << ", ";
        first = false;
        os << '(' << a.value << ", " << a.prob << ')';
    }
    os << '}';
    return os.str();
}

}  // namespace riskorder
