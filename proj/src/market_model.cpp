#include "mvp/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace mvp {

namespace {

std::string dims_message(const MarketModel& m) {
    std::ostringstream os;
    os << "inconsistent model dimensions: labels=" << m.labels.size() << ", mu=" << m.mu.size()
       << ", sigma=" << m.sigma.rows() << "x" << m.sigma.cols();
    return os.str();
}

// Fixes the sign so the first non-negligible entry is positive.
Vector canonical_direction(Vector w) {
    const double norm = w.norm();
    if (norm == 0.0) {
        return w;
    }
    w /= norm;
    const double cutoff = 1e-12 * w.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (std::abs(w[i]) > cutoff) {
            if (w[i] < 0.0) {
                w = -w;
            }
            break;
        }
    }
    return w;
}

struct CholeskyOutcome {
    Matrix lower;
    Eigen::Index failed_at = -1;  // -1 on success
    double failed_pivot = 0.0;
};

// Plain left-looking Cholesky with a relative pivot floor. Stops at the
// first pivot <= floor and keeps the rows computed so far.
CholeskyOutcome cholesky_with_floor(const Matrix& s, double relative_floor) {
    const Eigen::Index n = s.rows();
    const double floor = relative_floor * s.diagonal().maxCoeff();
    CholeskyOutcome out;
    out.lower = Matrix::Zero(n, n);
    Matrix& l = out.lower;
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = s(j, j);
        for (Eigen::Index k = 0; k < j; ++k) {
            pivot -= l(j, k) * l(j, k);
        }
        if (!(pivot > floor)) {
            out.failed_at = j;
            out.failed_pivot = pivot;
            return out;
        }
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (Eigen::Index k = 0; k < j; ++k) {
                v -= l(i, k) * l(j, k);
            }
            l(i, j) = v / ljj;
        }
    }
    return out;
}

// Null direction of the leading (j+1)x(j+1) block: w = (-S11^-1 S1j, 1, 0...).
// Row j of L already holds L11^-1 S1j, so one back substitution suffices.
Vector breakdown_certificate(const CholeskyOutcome& chol) {
    const Eigen::Index n = chol.lower.rows();
    const Eigen::Index j = chol.failed_at;
    Vector w = Vector::Zero(n);
    w[j] = 1.0;
    if (j > 0) {
        const auto l11 = chol.lower.topLeftCorner(j, j);
        const Vector lj = chol.lower.row(j).head(j).transpose();
        const Vector y = l11.transpose().triangularView<Eigen::Upper>().solve(lj);
        w.head(j) = -y;
    }
    return canonical_direction(std::move(w));
}

Vector eigen_certificate(const Matrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    // Eigenvalues are sorted ascending.
    return canonical_direction(solver.eigenvectors().col(0));
}

}  // namespace

SpdFactor::SpdFactor(Matrix lower, const Vector& mu) : lower_(std::move(lower)) {
    const Eigen::Index n = lower_.rows();
    const Vector ones = Vector::Ones(n);
    inv_ones_ = solve(ones);
    inv_mu_ = solve(mu);
    a_ = ones.dot(inv_ones_);
    b_ = mu.dot(inv_ones_);
    c_ = mu.dot(inv_mu_);
    // d = CA - B^2 = A * v S^-1 v^T with v = mu - (B/A) 1; the second form
    // has no cancellation when mu is nearly collinear with 1.
    const Vector v = mu - (b_ / a_) * ones;
    inv_centered_ = solve(v);
    d_ = std::max(0.0, a_ * v.dot(inv_centered_));
}

Vector SpdFactor::solve(const Vector& rhs) const {
    if (rhs.size() != lower_.rows()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "solve: rhs has length " + std::to_string(rhs.size()) + ", expected " +
                        std::to_string(lower_.rows()));
    }
    Vector y = lower_.triangularView<Eigen::Lower>().solve(rhs);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

bool ValidatedModel::returns_collinear_with_ones(double tol) const {
    return !(factor_.d() > tol * factor_.C() * factor_.A());
}

ValidatedModel validate_model(MarketModel raw, const ValidationOptions& options) {
    const auto n = raw.mu.size();
    if (raw.labels.empty() && n > 0) {
        raw.labels = default_labels(static_cast<std::size_t>(n));
    }
    if (n < 1 || raw.sigma.rows() != n || raw.sigma.cols() != n ||
        raw.labels.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorKind::DimensionMismatch, dims_message(raw));
    }
    if (!raw.mu.allFinite() || !raw.sigma.allFinite() ||
        (raw.risk_free && !std::isfinite(*raw.risk_free))) {
        throw Error(ErrorKind::MalformedInput, "model contains non-finite values");
    }

    const double asymmetry = (raw.sigma - raw.sigma.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > options.sym_tol) {
        std::ostringstream os;
        os << "covariance asymmetry " << asymmetry << " exceeds tolerance " << options.sym_tol;
        throw Error(ErrorKind::AsymmetryBeyondTolerance, os.str());
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (raw.sigma(i, i) < 0.0) {
            throw Error(ErrorKind::NegativeDiagonal,
                        "negative variance for asset " + raw.labels[static_cast<std::size_t>(i)]);
        }
    }
    Matrix sym = 0.5 * (raw.sigma + raw.sigma.transpose());
    raw.sigma = std::move(sym);

    CholeskyOutcome chol = cholesky_with_floor(raw.sigma, options.pivot_floor);
    if (chol.failed_at >= 0) {
        Vector cert = options.spd_mode == SpdMode::Breakdown ? breakdown_certificate(chol)
                                                             : eigen_certificate(raw.sigma);
        std::ostringstream os;
        os << "covariance is not positive definite: pivot " << chol.failed_at << " = "
           << chol.failed_pivot;
        throw Error(ErrorKind::NotPositiveDefinite, os.str(), std::move(cert));
    }

    SpdFactor factor(std::move(chol.lower), raw.mu);
    return ValidatedModel(std::move(raw), std::move(factor), asymmetry);
}

Vector solve_spd(const SpdFactor& factor, const Vector& rhs) { return factor.solve(rhs); }

PortfolioMoments portfolio_moments(const MarketModel& model, const Vector& weights) {
    if (weights.size() != model.mu.size() || model.sigma.rows() != weights.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "weights have length " + std::to_string(weights.size()) + ", model has " +
                        std::to_string(model.mu.size()) + " assets");
    }
    const double variance = weights.dot(model.sigma * weights);
    return {model.mu.dot(weights), std::sqrt(std::max(variance, 0.0))};
}

PortfolioMoments portfolio_moments(const ValidatedModel& model, const Vector& weights) {
    return portfolio_moments(model.model(), weights);
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        labels.push_back("A" + std::to_string(i));
    }
    return labels;
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::AsymmetryBeyondTolerance: return "AsymmetryBeyondTolerance";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NegativeDiagonal: return "NegativeDiagonal";
        case ErrorKind::MalformedInput: return "MalformedInput";
        case ErrorKind::RaggedRows: return "RaggedRows";
        case ErrorKind::NonNumericCell: return "NonNumericCell";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::InsufficientObservations: return "InsufficientObservations";
        case ErrorKind::CoefficientSumViolation: return "CoefficientSumViolation";
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::NonPositiveSystemicVariance: return "NonPositiveSystemicVariance";
        case ErrorKind::ZeroExcessReturns: return "ZeroExcessReturns";
        case ErrorKind::TangencyUndefined: return "TangencyUndefined";
        case ErrorKind::NegativeTangency: return "NegativeTangency";
        case ErrorKind::DegenerateFrontier: return "DegenerateFrontier";
        case ErrorKind::EqualFundReturns: return "EqualFundReturns";
        case ErrorKind::ZeroVariancePortfolio: return "ZeroVariancePortfolio";
    }
    return "Unknown";
}

bool is_degenerate_math(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroExcessReturns:
        case ErrorKind::TangencyUndefined:
        case ErrorKind::NegativeTangency:
        case ErrorKind::DegenerateFrontier:
        case ErrorKind::EqualFundReturns:
        case ErrorKind::ZeroVariancePortfolio:
            return true;
        default:
            return false;
    }
}

}  // namespace mvp
