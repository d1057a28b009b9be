#pragma once

#include <string_view>

namespace mvp::capm {

/// beta = cov(r_A, r_S) / var(r_S). Throws NonPositiveSystemicVariance.
double beta(double cov_as, double var_s);

/// Security market line value r_f + beta (mu_S - r_f). Evaluated as
/// (1 - beta) r_f + beta mu_S so that beta = 0 and beta = 1 reproduce r_f
/// and mu_S bit for bit.
double expected_return(double r_f, double beta, double mu_s);

enum class Valuation {
    Fair,            // on the line
    Overestimated,   // below the line
    Underestimated,  // above the line
};

std::string_view to_string(Valuation v);

inline constexpr double kDefaultClassifyTol = 1e-9;

Valuation sml_classify(double observed_mu, double beta, double r_f, double mu_s,
                       double tol = kDefaultClassifyTol);

}  // namespace mvp::capm
