#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace riskorder {

/// Raised when a distribution cannot be built from the given atoms.
class DistributionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Atom {
    double value;
    double prob;
};

/// Values closer than this are treated as one atom.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Largest deviation of the probability total from one that is accepted
/// (and then renormalized away).
inline constexpr double kProbabilitySumTolerance = 1e-9;

/**
 * Finite discrete law of a payoff.
 *
 * Atoms are kept sorted by value with duplicates merged and probabilities
 * summing to exactly one. Instances are immutable once built.
 */
class DiscreteDist {
public:
    /// Sorts, merges values within kAtomMergeTolerance and renormalizes.
    /// Zero-probability atoms are dropped; negative or non-finite input is
    /// rejected, as is a probability total off by more than
    /// kProbabilitySumTolerance.
    static DiscreteDist from_atoms(std::vector<Atom> atoms);

    /// Same as from_atoms but without the probability-sum check; the input
    /// weights are scaled to total one. Used for empirical laws and products
    /// whose rounding drift is known to be benign.
    static DiscreteDist from_weights(std::vector<Atom> atoms);

    static DiscreteDist point_mass(double value);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double min_value() const noexcept { return atoms_.front().value; }
    double max_value() const noexcept { return atoms_.back().value; }

    std::vector<double> support() const;

    /// Law of f(X) for an arbitrary map f; atoms are re-sorted and merged.
    template <class F>
    DiscreteDist map(F&& f) const {
        std::vector<Atom> out;
        out.reserve(atoms_.size());
        for (const auto& a : atoms_) out.push_back({f(a.value), a.prob});
        return from_weights(std::move(out));
    }

private:
    explicit DiscreteDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    static DiscreteDist normalize(std::vector<Atom> atoms, bool check_sum);

    std::vector<Atom> atoms_;
};

double mean(const DiscreteDist& d);

/// E[(X - strike)^+]
double call_value(const DiscreteDist& d, double strike);

/// E[(strike - X)^+]
double put_value(const DiscreteDist& d, double strike);

/// Law of X - E[X].
DiscreteDist center(const DiscreteDist& d);

/// Law of X + c.
DiscreteDist shift(const DiscreteDist& d, double c);

/// Law of a*X - (a-1)*E[X]; a mean-preserving spread of X for a >= 1.
DiscreteDist scale_center(const DiscreteDist& d, double a);

/// Law of X*Z for independent X ~ d1 and Z ~ d2.
DiscreteDist product_independent(const DiscreteDist& d1, const DiscreteDist& d2);

/// Total variation distance, sum |p1 - p2| / 2 over the merged supports
/// (values matched within kAtomMergeTolerance).
double total_variation(const DiscreteDist& d1, const DiscreteDist& d2);

/// Largest |value difference| when both laws have the same number of atoms
/// and matching probabilities; +inf otherwise. Used to compare laws that are
/// equal up to floating noise in the atom positions.
double sup_distance(const DiscreteDist& d1, const DiscreteDist& d2, double prob_tol = 1e-9);

std::string to_string(const DiscreteDist& d);

}  // namespace riskorder
