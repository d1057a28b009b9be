#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mvp/error.hpp"

namespace mvp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raw market description: asset labels, expected per-period returns and
/// their covariance matrix, plus an optional risk-free rate.
struct MarketModel {
    std::vector<std::string> labels;
    Vector mu;
    Matrix sigma;
    std::optional<double> risk_free;

    std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
};

/// How the near-null-space certificate is built when Sigma is not SPD.
enum class SpdMode {
    Eigen,      // eigenvector of the smallest eigenvalue
    Breakdown,  // Schur-complement null direction at the failing pivot
};

struct ValidationOptions {
    double sym_tol = 1e-8;
    double pivot_floor = 1e-12;  // relative to the largest diagonal entry
    SpdMode spd_mode = SpdMode::Eigen;
};

/// Cholesky factor L (Sigma = L L^T) of a validated covariance matrix with
/// the scalar aggregates every closed form needs:
///   A = 1 S^-1 1^T,  B = mu S^-1 1^T,  C = mu S^-1 mu^T,  d = CA - B^2.
/// Sigma^-1 is never formed.
class SpdFactor {
public:
    SpdFactor(Matrix lower, const Vector& mu);

    std::size_t size() const { return static_cast<std::size_t>(lower_.rows()); }
    const Matrix& lower() const { return lower_; }

    /// Solves Sigma x = rhs by forward and back substitution.
    Vector solve(const Vector& rhs) const;

    double A() const { return a_; }
    double B() const { return b_; }
    double C() const { return c_; }
    double d() const { return d_; }

    /// B / A: expected return of the global minimum-variance portfolio.
    double mu_sigma_min() const { return b_ / a_; }

    /// Sigma^-1 1^T, Sigma^-1 mu^T and Sigma^-1 (mu - mu_sigma_min 1)^T,
    /// cached at construction.
    const Vector& inv_ones() const { return inv_ones_; }
    const Vector& inv_mu() const { return inv_mu_; }
    const Vector& inv_centered() const { return inv_centered_; }

private:
    Matrix lower_;
    Vector inv_ones_;
    Vector inv_mu_;
    Vector inv_centered_;
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
    double d_ = 0.0;
};

/// A model whose covariance is exactly symmetric and positive definite,
/// together with its factor. Only validate_model() constructs one; it is
/// immutable afterwards and safe to share across threads.
class ValidatedModel {
public:
    const MarketModel& model() const { return model_; }
    const SpdFactor& factor() const { return factor_; }

    std::size_t size() const { return model_.size(); }
    const Vector& mu() const { return model_.mu; }
    const Matrix& sigma() const { return model_.sigma; }
    const std::vector<std::string>& labels() const { return model_.labels; }
    std::optional<double> risk_free() const { return model_.risk_free; }

    /// Largest |Sigma_ij - Sigma_ji| seen in the raw input before averaging.
    double input_asymmetry() const { return input_asymmetry_; }

    /// mu is (numerically) a multiple of 1: d <= tol * C * A.
    bool returns_collinear_with_ones(double tol = 1e-12) const;

private:
    friend ValidatedModel validate_model(MarketModel raw, const ValidationOptions& options);
    ValidatedModel(MarketModel model, SpdFactor factor, double asymmetry)
        : model_(std::move(model)), factor_(std::move(factor)), input_asymmetry_(asymmetry) {}

    MarketModel model_;
    SpdFactor factor_;
    double input_asymmetry_;
};

/// Checks dimensions, symmetrizes within options.sym_tol, and factorizes.
/// Throws Error(DimensionMismatch | AsymmetryBeyondTolerance | NegativeDiagonal |
/// NotPositiveDefinite); the last one carries a singularity certificate.
ValidatedModel validate_model(MarketModel raw, const ValidationOptions& options = {});

Vector solve_spd(const SpdFactor& factor, const Vector& rhs);

struct PortfolioMoments {
    double mu = 0.0;
    double sigma = 0.0;
};

/// mu_P = mu W^T and sigma_P = sqrt(W Sigma W^T). Weights need not sum to 1.
PortfolioMoments portfolio_moments(const MarketModel& model, const Vector& weights);
PortfolioMoments portfolio_moments(const ValidatedModel& model, const Vector& weights);

/// Default asset labels "A1".."An".
std::vector<std::string> default_labels(std::size_t n);

}  // namespace mvp
