#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mvp/market_model.hpp"

namespace mvp {

enum class Warning {
    NegativeTangency,   // 1 S^-1 mu~ < 0: the closed form is the Sharpe minimizer
    InefficientBranch,  // target below mu_sigma_min (lower half of the hyperbola)
};

std::string_view to_string(Warning w);

/// An optimal (or combined) portfolio and its diagnostics.
///
/// `kkt_residual` is the infinity norm of the stationarity equation of the
/// problem that produced the weights, in absolute units; `kkt_scale` is the
/// infinity norm of that equation's leading term, so relative_kkt() is
/// comparable across problems.
struct PortfolioSolution {
    Vector weights;
    std::optional<double> risk_free_weight;
    double mu = 0.0;
    double sigma = 0.0;
    std::optional<double> sharpe;
    double kkt_residual = 0.0;
    double kkt_scale = 0.0;
    std::vector<Warning> warnings;

    bool has_warning(Warning w) const;
    double relative_kkt() const;
};

/// W = S^-1 1 / A, sigma^2 = 1 / A.
PortfolioSolution min_variance_portfolio(const ValidatedModel& model);

/// W = S^-1 mu~ / (1 S^-1 mu~) with mu~ = mu - r_f 1. The reported Sharpe
/// ratio carries the sign of 1 S^-1 mu~; a negative denominator still yields
/// a solution, flagged NegativeTangency.
PortfolioSolution max_sharpe_portfolio(const ValidatedModel& model, double r_f,
                                       const Tolerances& tol = {});

/// S_P(W) = W mu~^T / sqrt(W Sigma W^T); no normalization of W.
double sharpe_ratio(const ValidatedModel& model, const Vector& weights, double r_f);

/// Minimum variance subject to 1 W^T = 1 and mu W^T = mu_0.
PortfolioSolution min_variance_for_return(const ValidatedModel& model, double mu_0,
                                          const Tolerances& tol = {});

/// Minimum variance of risky weights W plus a risk-free weight w_f = 1 - 1 W^T
/// subject to mu W^T + w_f r_f = mu_0.
PortfolioSolution min_variance_with_riskfree(const ValidatedModel& model, double r_f,
                                             double mu_0, const Tolerances& tol = {});

/// Interpolation weights of two funds reaching `target`.
std::pair<double, double> two_fund_weights(double mu_01, double mu_02, double target,
                                           const Tolerances& tol = {});

struct Fund {
    Vector weights;
    std::optional<double> expected_return;  // defaults to mu W^T
};

struct FundCombination {
    PortfolioSolution portfolio;
    double target = 0.0;     // sum_i coeffs_i * mu_0i
    bool efficient = false;  // on the upper frontier branch at `target`
};

/// Portfolio sum_i coeffs_i W_i. `efficient` holds when its sigma matches the
/// frontier at the realized target within tol.efficiency (relative) and the
/// target is not below mu_sigma_min.
FundCombination combine_funds(const ValidatedModel& model, std::span<const Fund> funds,
                              std::span<const double> coeffs, const Tolerances& tol = {});

}  // namespace mvp
