#include "riskorder/utility.hpp"

#include <cmath>
#include <sstream>

namespace riskorder {

Utility Utility::power(double p) {
    if (!std::isfinite(p) || p <= 0.0)
        throw std::invalid_argument("power utility requires p > 0");
    if (p == 1.0) return log();
    return Utility(UtilityKind::power, p);
}

Utility Utility::log() { return Utility(UtilityKind::log, 1.0); }

Utility Utility::exponential(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw std::invalid_argument("exponential utility requires gamma > 0");
    return Utility(UtilityKind::exponential, gamma);
}

bool Utility::in_domain(double x) const noexcept {
    if (!std::isfinite(x)) return false;
    return kind_ == UtilityKind::exponential || x > 0.0;
}

void Utility::require_domain(double x) const {
    if (!in_domain(x))
        throw UtilityDomainError(describe() + " is undefined at x = " + std::to_string(x));
}

double Utility::evaluate(double x) const {
    require_domain(x);
    switch (kind_) {
        case UtilityKind::power: return std::pow(x, 1.0 - param_) / (1.0 - param_);
        case UtilityKind::log: return std::log(x);
        case UtilityKind::exponential: return -std::exp(-param_ * x);
    }
    return 0.0;
}

double Utility::marginal(double x) const {
    require_domain(x);
    switch (kind_) {
        case UtilityKind::power: return std::pow(x, -param_);
        case UtilityKind::log: return 1.0 / x;
        case UtilityKind::exponential: return param_ * std::exp(-param_ * x);
    }
    return 0.0;
}

double Utility::inverse_marginal(double y) const {
    if (!std::isfinite(y) || y <= 0.0)
        throw UtilityDomainError("inverse marginal utility requires y > 0");
    switch (kind_) {
        case UtilityKind::power: return std::pow(y, -1.0 / param_);
        case UtilityKind::log: return 1.0 / y;
        case UtilityKind::exponential: return -std::log(y / param_) / param_;
    }
    return 0.0;
}

double Utility::ara(double x) const {
    require_domain(x);
    switch (kind_) {
        case UtilityKind::power: return param_ / x;
        case UtilityKind::log: return 1.0 / x;
        case UtilityKind::exponential: return param_;
    }
    return 0.0;
}

std::string Utility::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case UtilityKind::power: os << "power(p=" << param_ << ")"; break;
        case UtilityKind::log: os << "log"; break;
        case UtilityKind::exponential: os << "exponential(gamma=" << param_ << ")"; break;
    }
    return os.str();
}

RiskComparison more_risk_averse(const Utility& m, const Utility& l) {
    const bool m_exp = m.kind() == UtilityKind::exponential;
    const bool l_exp = l.kind() == UtilityKind::exponential;
    // p/x against a constant gamma crosses on (0, inf) in both directions.
    if (m_exp != l_exp) return RiskComparison::incomparable;
    // Within a family, ARA is parameter / x or a constant parameter.
    return m.parameter() >= l.parameter() ? RiskComparison::more : RiskComparison::less;
}

}  // namespace riskorder
