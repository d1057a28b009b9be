#include "mvp/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mvp {

FrontierCoefficients frontier_coefficients(const ValidatedModel& model, const Tolerances& tol) {
    if (model.returns_collinear_with_ones(tol.degenerate)) {
        throw Error(ErrorKind::DegenerateFrontier,
                    "expected returns are collinear with the unit vector; no frontier hyperbola");
    }
    const SpdFactor& f = model.factor();
    FrontierCoefficients fc;
    fc.d = f.d();
    fc.a = f.A() / fc.d;
    fc.b = -2.0 * f.B() / fc.d;
    fc.c = f.C() / fc.d;
    fc.mu_sigma_min = f.mu_sigma_min();
    fc.sigma_min = 1.0 / std::sqrt(f.A());
    return fc;
}

LineSpec cml_line(const ValidatedModel& model, double r_f, bool mirrored, const Tolerances& tol) {
    const Vector excess = model.mu().array() - r_f;
    if (excess.cwiseAbs().maxCoeff() <= tol.zero_excess) {
        throw Error(ErrorKind::ZeroExcessReturns, "expected returns equal the risk-free rate");
    }
    const double slope = std::sqrt(excess.dot(model.factor().solve(excess)));
    return {mirrored ? -slope : slope, r_f};
}

std::pair<double, double> TangentLine::point(double w) const {
    return {w * sigma_m, w * mu_m + (1.0 - w) * line.intercept};
}

TangentLine tangent_line(const ValidatedModel& model, double r_f, const Tolerances& tol) {
    PortfolioSolution m = max_sharpe_portfolio(model, r_f, tol);
    if (m.has_warning(Warning::NegativeTangency)) {
        std::ostringstream os;
        os << "1 S^-1 mu~ < 0 at r_f = " << r_f
           << ": the closed form minimizes the Sharpe ratio and touches no efficient point";
        throw Error(ErrorKind::NegativeTangency, os.str());
    }
    TangentLine t;
    t.sigma_m = m.sigma;
    t.mu_m = m.mu;
    t.line = {(m.mu - r_f) / m.sigma, r_f};
    t.portfolio = std::move(m);
    return t;
}

std::vector<FrontierPoint> sample_frontier(const ValidatedModel& model, double mu_lo, double mu_hi,
                                           int k, bool include_inefficient, const Tolerances& tol) {
    if (k < 2) {
        throw Error(ErrorKind::InvalidRange, "need at least 2 frontier samples");
    }
    if (!(mu_lo < mu_hi)) {
        throw Error(ErrorKind::InvalidRange, "empty return range");
    }
    const FrontierCoefficients fc = frontier_coefficients(model, tol);
    double lo = mu_lo;
    if (!include_inefficient && lo < fc.mu_sigma_min) {
        lo = fc.mu_sigma_min;
        if (!(lo < mu_hi)) {
            throw Error(ErrorKind::InvalidRange, "return range lies below the efficient frontier");
        }
    }

    std::vector<FrontierPoint> points;
    points.reserve(static_cast<std::size_t>(k));
    const double step = (mu_hi - lo) / (k - 1);
    for (int i = 0; i < k; ++i) {
        FrontierPoint p;
        p.mu = i + 1 == k ? mu_hi : lo + step * i;
        p.sigma = std::sqrt(std::max(fc.variance_at(p.mu), 0.0));
        p.efficient = p.mu >= fc.mu_sigma_min;
        PortfolioSolution s = min_variance_for_return(model, p.mu, tol);
        p.check_error = std::abs(s.sigma - p.sigma) / p.sigma;
        p.weights = std::move(s.weights);
        points.push_back(std::move(p));
    }
    return points;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& points) {
    out << "mu,sigma,efficient\n";
    char buf[64];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", p.mu, p.sigma, p.efficient ? 1 : 0);
        out << buf;
    }
}

}  // namespace mvp
