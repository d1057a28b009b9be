#include "mvp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvp {

namespace {

Vector excess_returns(const ValidatedModel& model, double r_f, const Tolerances& tol) {
    Vector excess = model.mu().array() - r_f;
    if (excess.cwiseAbs().maxCoeff() <= tol.zero_excess) {
        throw Error(ErrorKind::ZeroExcessReturns, "expected returns equal the risk-free rate");
    }
    return excess;
}

void require_frontier(const ValidatedModel& model, const Tolerances& tol) {
    if (model.returns_collinear_with_ones(tol.degenerate)) {
        std::ostringstream os;
        os << "expected returns are collinear with the unit vector (d = " << model.factor().d()
           << "); the frontier degenerates to a point";
        throw Error(ErrorKind::DegenerateFrontier, os.str());
    }
}

void fill_moments(const ValidatedModel& model, PortfolioSolution& s) {
    const auto m = portfolio_moments(model, s.weights);
    s.mu = m.mu;
    s.sigma = m.sigma;
}

void attach_model_sharpe(const ValidatedModel& model, PortfolioSolution& s) {
    if (model.risk_free() && s.sigma > 0.0) {
        s.sharpe = sharpe_ratio(model, s.weights, *model.risk_free());
    }
}

// Multipliers (lambda_1, lambda_2) of the two-constraint problem at mu_0,
// from the inverse of [[C, B], [B, A]] written around the vertex.
std::pair<double, double> frontier_multipliers(const SpdFactor& f, double mu_0) {
    const double shift = mu_0 - f.mu_sigma_min();
    const double half_l1 = f.A() * shift / f.d();
    const double half_l2 = 1.0 / f.A() - f.B() * shift / f.d();
    return {2.0 * half_l1, 2.0 * half_l2};
}

void two_constraint_kkt(const ValidatedModel& model, double mu_0, PortfolioSolution& s) {
    const auto [l1, l2] = frontier_multipliers(model.factor(), mu_0);
    const Vector grad = 2.0 * (model.sigma() * s.weights);
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(model.size()));
    s.kkt_residual = (grad - l1 * model.mu() - l2 * ones).cwiseAbs().maxCoeff();
    s.kkt_scale = grad.cwiseAbs().maxCoeff();
}

void one_constraint_kkt(const ValidatedModel& model, double lambda, const Vector& direction,
                        PortfolioSolution& s) {
    const Vector grad = 2.0 * (model.sigma() * s.weights);
    s.kkt_residual = (grad - lambda * direction).cwiseAbs().maxCoeff();
    s.kkt_scale = grad.cwiseAbs().maxCoeff();
}

}  // namespace

std::string_view to_string(Warning w) {
    switch (w) {
        case Warning::NegativeTangency: return "NegativeTangency";
        case Warning::InefficientBranch: return "InefficientBranch";
    }
    return "Unknown";
}

bool PortfolioSolution::has_warning(Warning w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

double PortfolioSolution::relative_kkt() const {
    if (kkt_scale > 0.0) {
        return kkt_residual / kkt_scale;
    }
    return kkt_residual;
}

PortfolioSolution min_variance_portfolio(const ValidatedModel& model) {
    const SpdFactor& f = model.factor();
    PortfolioSolution s;
    s.weights = f.inv_ones() / f.A();
    fill_moments(model, s);
    attach_model_sharpe(model, s);
    one_constraint_kkt(model, 2.0 / f.A(), Vector::Ones(static_cast<Eigen::Index>(model.size())), s);
    return s;
}

PortfolioSolution max_sharpe_portfolio(const ValidatedModel& model, double r_f,
                                       const Tolerances& tol) {
    const Vector excess = excess_returns(model, r_f, tol);
    const Vector x = model.factor().solve(excess);
    const double denom = x.sum();
    if (!(std::abs(denom) >= tol.tangency * x.lpNorm<1>())) {
        std::ostringstream os;
        os << "1 S^-1 mu~ = " << denom << " vanishes; the tangency portfolio is undefined";
        throw Error(ErrorKind::TangencyUndefined, os.str());
    }

    PortfolioSolution s;
    s.weights = x / denom;
    fill_moments(model, s);
    const double quad = excess.dot(x);
    s.sharpe = std::sqrt(quad) * (denom > 0.0 ? 1.0 : -1.0);
    if (denom < 0.0) {
        s.warnings.push_back(Warning::NegativeTangency);
    }

    // Stationarity of S_P on the budget plane: (W mu~) Sigma W = (W Sigma W) mu~.
    const Vector sw = model.sigma() * s.weights;
    const double excess_p = s.weights.dot(excess);
    const double variance = s.weights.dot(sw);
    const Vector lead = excess_p * sw;
    s.kkt_residual = (lead - variance * excess).cwiseAbs().maxCoeff();
    s.kkt_scale = lead.cwiseAbs().maxCoeff();
    return s;
}

double sharpe_ratio(const ValidatedModel& model, const Vector& weights, double r_f) {
    if (weights.size() != static_cast<Eigen::Index>(model.size())) {
        throw Error(ErrorKind::DimensionMismatch, "weights length does not match the model");
    }
    const double variance = weights.dot(model.sigma() * weights);
    if (!(variance > 0.0)) {
        throw Error(ErrorKind::ZeroVariancePortfolio, "portfolio variance is not positive");
    }
    const Vector excess = model.mu().array() - r_f;
    return weights.dot(excess) / std::sqrt(variance);
}

PortfolioSolution min_variance_for_return(const ValidatedModel& model, double mu_0,
                                          const Tolerances& tol) {
    require_frontier(model, tol);
    const SpdFactor& f = model.factor();

    // W = lambda_1/2 S^-1 mu + lambda_2/2 S^-1 1, rearranged as the vertex
    // plus a move along S^-1 (mu - mu_sigma_min 1).
    const double shift = mu_0 - f.mu_sigma_min();
    PortfolioSolution s;
    s.weights = f.inv_ones() / f.A() + (shift * f.A() / f.d()) * f.inv_centered();
    fill_moments(model, s);
    attach_model_sharpe(model, s);
    two_constraint_kkt(model, mu_0, s);
    if (mu_0 < f.mu_sigma_min()) {
        s.warnings.push_back(Warning::InefficientBranch);
    }
    return s;
}

PortfolioSolution min_variance_with_riskfree(const ValidatedModel& model, double r_f,
                                             double mu_0, const Tolerances& tol) {
    const Vector excess = excess_returns(model, r_f, tol);
    const Vector x = model.factor().solve(excess);
    const double quad = excess.dot(x);
    const double target_excess = mu_0 - r_f;

    PortfolioSolution s;
    s.weights = (target_excess / quad) * x;
    s.risk_free_weight = 1.0 - s.weights.sum();
    s.mu = model.mu().dot(s.weights) + *s.risk_free_weight * r_f;
    s.sigma = std::abs(target_excess) / std::sqrt(quad);
    if (s.sigma > 0.0) {
        s.sharpe = target_excess / s.sigma;
    }
    one_constraint_kkt(model, 2.0 * target_excess / quad, excess, s);
    return s;
}

std::pair<double, double> two_fund_weights(double mu_01, double mu_02, double target,
                                           const Tolerances& tol) {
    const double gap = mu_01 - mu_02;
    if (!(std::abs(gap) > tol.equal_funds * std::max(std::abs(mu_01), std::abs(mu_02)))) {
        throw Error(ErrorKind::EqualFundReturns, "the two funds have equal expected returns");
    }
    return {(target - mu_02) / gap, (mu_01 - target) / gap};
}

FundCombination combine_funds(const ValidatedModel& model, std::span<const Fund> funds,
                              std::span<const double> coeffs, const Tolerances& tol) {
    const auto n = static_cast<Eigen::Index>(model.size());
    if (funds.empty() || funds.size() != coeffs.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "got " + std::to_string(funds.size()) + " funds and " +
                        std::to_string(coeffs.size()) + " coefficients");
    }
    double coeff_sum = 0.0;
    for (const double c : coeffs) {
        coeff_sum += c;
    }
    if (!(std::abs(coeff_sum - 1.0) <= tol.coefficient_sum)) {
        std::ostringstream os;
        os << "fund coefficients sum to " << coeff_sum << ", expected 1";
        throw Error(ErrorKind::CoefficientSumViolation, os.str());
    }

    FundCombination out;
    PortfolioSolution& s = out.portfolio;
    s.weights = Vector::Zero(n);
    for (std::size_t i = 0; i < funds.size(); ++i) {
        const Fund& fund = funds[i];
        if (fund.weights.size() != n) {
            throw Error(ErrorKind::DimensionMismatch,
                        "fund " + std::to_string(i + 1) + " has " +
                            std::to_string(fund.weights.size()) + " weights, model has " +
                            std::to_string(n) + " assets");
        }
        if (!(std::abs(fund.weights.sum() - 1.0) <= tol.fund_budget)) {
            std::ostringstream os;
            os << "fund " << i + 1 << " weights sum to " << fund.weights.sum() << ", expected 1";
            throw Error(ErrorKind::CoefficientSumViolation, os.str());
        }
        const double fund_return = fund.expected_return.value_or(model.mu().dot(fund.weights));
        s.weights += coeffs[i] * fund.weights;
        out.target += coeffs[i] * fund_return;
    }
    fill_moments(model, s);
    attach_model_sharpe(model, s);

    const SpdFactor& f = model.factor();
    double frontier_sigma = 0.0;
    if (model.returns_collinear_with_ones(tol.degenerate)) {
        // Every portfolio has the same return; the frontier is the vertex.
        one_constraint_kkt(model, 2.0 / f.A(), Vector::Ones(n), s);
        frontier_sigma = 1.0 / std::sqrt(f.A());
    } else {
        two_constraint_kkt(model, out.target, s);
        frontier_sigma = min_variance_for_return(model, out.target, tol).sigma;
    }
    const bool upper_branch =
        out.target >= f.mu_sigma_min() - 1e-12 * std::max(1.0, std::abs(f.mu_sigma_min()));
    if (!upper_branch) {
        s.warnings.push_back(Warning::InefficientBranch);
    }
    out.efficient = upper_branch &&
                    std::abs(s.sigma - frontier_sigma) <= tol.efficiency * frontier_sigma;
    return out;
}

}  // namespace mvp
