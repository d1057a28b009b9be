#pragma once

#include <ostream>
#include <vector>

#include "mvp/market_model.hpp"
#include "mvp/optimizer.hpp"

namespace mvp {

/// The minimum variance frontier sigma^2 = a mu^2 + b mu + c, with
/// a = A/d, b = -2B/d, c = C/d and d = CA - B^2. The efficient frontier is
/// the branch mu >= mu_sigma_min.
struct FrontierCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double mu_sigma_min = 0.0;
    double sigma_min = 0.0;

    double variance_at(double mu) const { return (a * mu + b) * mu + c; }
};

FrontierCoefficients frontier_coefficients(const ValidatedModel& model, const Tolerances& tol = {});

/// The half-line mu = slope * sigma + intercept, sigma >= 0.
struct LineSpec {
    double slope = 0.0;
    double intercept = 0.0;

    double mu_at(double sigma) const { return slope * sigma + intercept; }
};

/// Capital market line mu = sqrt(mu~ S^-1 mu~^T) sigma + r_f. With `mirrored`
/// the lower half-line (negative slope) of the risk-free minimum variance
/// frontier is returned instead.
LineSpec cml_line(const ValidatedModel& model, double r_f, bool mirrored = false,
                  const Tolerances& tol = {});

struct TangentLine {
    LineSpec line;
    double sigma_m = 0.0;
    double mu_m = 0.0;
    PortfolioSolution portfolio;

    /// A mix of w in the tangency portfolio and 1 - w in the risk-free asset:
    /// returns (sigma, mu) = (w sigma_M, w mu_M + (1 - w) r_f).
    std::pair<double, double> point(double w) const;
};

/// Line through (0, r_f) and the tangency portfolio M. Unlike
/// max_sharpe_portfolio(), a negative 1 S^-1 mu~ is an error here
/// (NegativeTangency): no tangency geometry exists.
TangentLine tangent_line(const ValidatedModel& model, double r_f, const Tolerances& tol = {});

struct FrontierPoint {
    double mu = 0.0;
    double sigma = 0.0;  // from the frontier coefficients
    bool efficient = false;
    Vector weights;      // from min_variance_for_return at mu
    double check_error = 0.0;  // |sigma(weights) - sigma| / sigma
};

/// k points evenly spaced in mu, sorted ascending. Without
/// `include_inefficient` the grid starts at max(mu_lo, mu_sigma_min).
std::vector<FrontierPoint> sample_frontier(const ValidatedModel& model, double mu_lo, double mu_hi,
                                           int k, bool include_inefficient,
                                           const Tolerances& tol = {});

/// Writes the `mu,sigma,efficient` table with 17 significant digits.
void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& points);

}  // namespace mvp
