#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mvp/frontier.hpp"
#include "support.hpp"

using namespace mvp;
using namespace mvp_test;

namespace {

ValidatedModel identity_unit_returns() {
    MarketModel m;
    m.sigma = Matrix::Identity(2, 2);
    m.mu = Vector{{0.0, 1.0}};
    return validate_model(m);
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error");
    return ErrorKind::MalformedInput;
}

}  // namespace

TEST_CASE("identity frontier coefficients") {
    const auto fc = frontier_coefficients(identity_unit_returns());
    CHECK(fc.a == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(fc.b == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(fc.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fc.mu_sigma_min == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fc.sigma_min == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(fc.variance_at(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("vertex identities") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = validate_model(random_model(rng, 2 + trial % 6));
        const auto fc = frontier_coefficients(m);
        CHECK(fc.a > 0.0);
        CHECK(rel_diff(-fc.b / (2 * fc.a), fc.mu_sigma_min) <= 1e-12);
        CHECK(rel_diff(fc.variance_at(fc.mu_sigma_min), fc.sigma_min * fc.sigma_min) <= 1e-10);
        CHECK(rel_diff(fc.sigma_min, min_variance_portfolio(m).sigma) <= 1e-12);
        CHECK(rel_diff(fc.b * fc.b - 4 * fc.a * fc.c, -4.0 / fc.d) <= 1e-8);
    }
}

TEST_CASE("frontier membership of target solutions") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> offset(-0.05, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = validate_model(random_model(rng, 2 + trial % 6));
        const auto fc = frontier_coefficients(m);
        for (int k = 0; k < 20; ++k) {
            const double mu_0 = fc.mu_sigma_min + offset(rng);
            const auto s = min_variance_for_return(m, mu_0);
            CHECK(rel_diff(s.sigma * s.sigma, fc.variance_at(mu_0)) <= 1e-10);
        }
    }
}

TEST_CASE("capital market line") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = validate_model(random_model(rng, 2 + trial % 6));
        const double r_f = rate_below_vertex(m);
        const Vector excess = m.mu().array() - r_f;
        const double quad = excess.dot(solve_spd(m.factor(), excess));
        const auto line = cml_line(m, r_f);
        CHECK(rel_diff(line.slope * line.slope, quad) <= 1e-12);
        CHECK(line.intercept == r_f);
        CHECK(cml_line(m, r_f, true).slope == -line.slope);

        // Every risk-free frontier portfolio sits on the line.
        const auto s = min_variance_with_riskfree(m, r_f, r_f + 0.05);
        CHECK(rel_diff(line.mu_at(s.sigma), s.mu) <= 1e-12);
    }
}

TEST_CASE("tangent line touches the frontier once at the tangency portfolio") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = validate_model(random_model(rng, 2 + trial % 6));
        const double r_f = rate_below_vertex(m, 0.005 + 0.005 * (trial % 4));
        const auto t = tangent_line(m, r_f);
        const auto fc = frontier_coefficients(m);
        CHECK(rel_diff(t.line.slope, *max_sharpe_portfolio(m, r_f).sharpe) <= 1e-10);
        CHECK(rel_diff(t.line.slope, cml_line(m, r_f).slope) <= 1e-12);
        CHECK(rel_diff(fc.variance_at(t.mu_m), t.sigma_m * t.sigma_m) <= 1e-10);
        CHECK(rel_diff(t.line.mu_at(t.sigma_m), t.mu_m) <= 1e-12);

        // (mu - r_f)^2 / s^2 = a mu^2 + b mu + c has a double root.
        const double s2 = t.line.slope * t.line.slope;
        const double qa = fc.a - 1.0 / s2;
        const double qb = fc.b + 2.0 * r_f / s2;
        const double qc = fc.c - r_f * r_f / s2;
        CHECK(std::abs(qb * qb - 4 * qa * qc) <= 1e-8 * qb * qb);
        CHECK(rel_diff(-qb / (2 * qa), t.mu_m) <= 1e-8);

        const auto [s0, m0] = t.point(0.0);
        CHECK(s0 == 0.0);
        CHECK(m0 == r_f);
        const auto [s1, m1] = t.point(1.0);
        CHECK(s1 == t.sigma_m);
        CHECK(rel_diff(m1, t.mu_m) <= 1e-15);
    }
}

TEST_CASE("tangent line needs a positive tangency denominator") {
    const auto m = identity_unit_returns();
    CHECK(kind_of([&] { tangent_line(m, 0.9); }) == ErrorKind::NegativeTangency);
    CHECK(kind_of([&] { tangent_line(m, 0.5); }) == ErrorKind::TangencyUndefined);
}

TEST_CASE("degenerate frontier") {
    MarketModel flat;
    flat.sigma = Matrix::Identity(3, 3);
    flat.mu = Vector::Constant(3, 0.04);
    const auto m = validate_model(flat);
    CHECK(kind_of([&] { frontier_coefficients(m); }) == ErrorKind::DegenerateFrontier);
    CHECK(kind_of([&] { sample_frontier(m, 0.0, 0.1, 5, true); }) == ErrorKind::DegenerateFrontier);
}

TEST_CASE("sampled frontier") {
    std::mt19937_64 rng(25);
    const auto m = validate_model(random_model(rng, 5));
    const auto fc = frontier_coefficients(m);
    const double lo = fc.mu_sigma_min - 0.04;
    const double hi = fc.mu_sigma_min + 0.08;

    const auto all = sample_frontier(m, lo, hi, 25, true);
    REQUIRE(all.size() == 25);
    CHECK(all.front().mu == lo);
    CHECK(all.back().mu == hi);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (i > 0) {
            CHECK(all[i].mu > all[i - 1].mu);
        }
        CHECK(all[i].check_error <= 1e-8);
        CHECK(all[i].efficient == (all[i].mu >= fc.mu_sigma_min));
        CHECK(rel_diff(all[i].sigma * all[i].sigma, fc.variance_at(all[i].mu)) <= 1e-12);
        CHECK(std::abs(all[i].weights.sum() - 1.0) <= 1e-12);
    }

    const auto upper = sample_frontier(m, lo, hi, 10, false);
    CHECK(upper.front().mu == fc.mu_sigma_min);
    CHECK(upper.back().mu == hi);
    for (const auto& p : upper) {
        CHECK(p.efficient);
    }
}

TEST_CASE("sampling ranges") {
    std::mt19937_64 rng(26);
    const auto m = validate_model(random_model(rng, 3));
    const double v = m.factor().mu_sigma_min();
    CHECK(kind_of([&] { sample_frontier(m, 0.0, 0.1, 1, true); }) == ErrorKind::InvalidRange);
    CHECK(kind_of([&] { sample_frontier(m, 0.1, 0.1, 5, true); }) == ErrorKind::InvalidRange);
    CHECK(kind_of([&] { sample_frontier(m, 0.2, 0.1, 5, true); }) == ErrorKind::InvalidRange);
    CHECK(kind_of([&] { sample_frontier(m, v - 0.2, v - 0.1, 5, false); }) == ErrorKind::InvalidRange);
    CHECK(sample_frontier(m, v - 0.2, v - 0.1, 5, true).size() == 5);
}

TEST_CASE("frontier CSV") {
    const auto pts = sample_frontier(identity_unit_returns(), 0.0, 1.0, 3, true);
    std::ostringstream out;
    write_frontier_csv(out, pts);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "mu,sigma,efficient");
    std::getline(in, line);
    CHECK(line == "0,1,0");
    std::getline(in, line);
    CHECK(line.substr(0, 4) == "0.5,");
    CHECK(line.back() == '1');
    CHECK(std::stod(line.substr(4)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-16));
    std::getline(in, line);
    CHECK(line == "1,1,1");
    CHECK_FALSE(std::getline(in, line));
}
