#include "mvp/capm.hpp"

#include <cmath>
#include <stdexcept>

#include "mvp/error.hpp"

namespace mvp::capm {

double beta(double cov_as, double var_s) {
    if (!(var_s > 0.0)) {
        throw Error(ErrorKind::NonPositiveSystemicVariance, "systemic variance must be positive");
    }
    return cov_as / var_s;
}

double expected_return(double r_f, double beta, double mu_s) {
    return (1.0 - beta) * r_f + beta * mu_s;
}

std::string_view to_string(Valuation v) {
    switch (v) {
        case Valuation::Fair: return "Fair";
        case Valuation::Overestimated: return "Overestimated";
        case Valuation::Underestimated: return "Underestimated";
    }
    return "Unknown";
}

Valuation sml_classify(double observed_mu, double beta, double r_f, double mu_s, double tol) {
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("classification tolerance must be non-negative");
    }
    const double gap = observed_mu - expected_return(r_f, beta, mu_s);
    if (std::abs(gap) <= tol) {
        return Valuation::Fair;
    }
    return gap < 0.0 ? Valuation::Overestimated : Valuation::Underestimated;
}

}  // namespace mvp::capm
