#pragma once

#include <stdexcept>
#include <string>

namespace riskorder {

class UtilityDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class UtilityKind { power, log, exponential };
enum class UtilityDomain { positive_halfline, whole_real_line };

/**
 * Closed-form utility: power x^(1-p)/(1-p), log, or exponential -exp(-gamma x).
 *
 * Power utilities with p == 1 are stored as log.
 */
class Utility {
public:
    static Utility power(double p);
    static Utility log();
    static Utility exponential(double gamma);

    UtilityKind kind() const noexcept { return kind_; }
    UtilityDomain domain() const noexcept {
        return kind_ == UtilityKind::exponential ? UtilityDomain::whole_real_line
                                                 : UtilityDomain::positive_halfline;
    }
    /// Relative risk aversion p for power (1 for log); gamma for exponential.
    double parameter() const noexcept { return param_; }
    bool in_domain(double x) const noexcept;

    double evaluate(double x) const;
    double marginal(double x) const;
    double inverse_marginal(double y) const;
    /// Absolute risk aversion -U''(x)/U'(x).
    double ara(double x) const;

    std::string describe() const;

    friend bool operator==(const Utility&, const Utility&) = default;

private:
    Utility(UtilityKind k, double p) : kind_(k), param_(p) {}
    void require_domain(double x) const;

    UtilityKind kind_;
    double param_;
};

enum class RiskComparison { more, less, incomparable };

/// Whether `m` is more risk averse than `l` in the sense of pointwise
/// dominance of absolute risk aversion on the common domain. Equal
/// preferences compare as `more`.
RiskComparison more_risk_averse(const Utility& m, const Utility& l);

}  // namespace riskorder
