#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "mvp/market_model.hpp"
#include "support.hpp"

using namespace mvp;
using namespace mvp_test;

namespace {

MarketModel make(Matrix sigma, Vector mu) {
    MarketModel m;
    m.sigma = std::move(sigma);
    m.mu = std::move(mu);
    return m;
}

ErrorKind kind_of(const MarketModel& m, const ValidationOptions& opt = {}) {
    try {
        (void)validate_model(m, opt);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("model was accepted");
    return ErrorKind::MalformedInput;
}

Error caught(const MarketModel& m, const ValidationOptions& opt = {}) {
    try {
        (void)validate_model(m, opt);
    } catch (const Error& e) {
        return e;
    }
    FAIL("model was accepted");
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("aggregates for the identity covariance") {
    const auto v = validate_model(make(Matrix::Identity(2, 2), Vector{{0.05, 0.10}}));
    CHECK(v.factor().A() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(v.factor().B() == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(v.factor().C() == doctest::Approx(0.0125).epsilon(1e-15));
    CHECK(v.factor().d() == doctest::Approx(0.0125 * 2 - 0.15 * 0.15).epsilon(1e-12));
    CHECK(v.labels() == std::vector<std::string>{"A1", "A2"});
}

TEST_CASE("solve_spd on diagonal systems") {
    const auto id = validate_model(make(Matrix::Identity(3, 3), Vector{{0.1, 0.2, 0.3}}));
    const Vector rhs{{1.0, -2.0, 3.0}};
    CHECK(max_abs_diff(solve_spd(id.factor(), rhs), rhs) == 0.0);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const auto v = validate_model(make(d, Vector{{0.1, 0.2}}));
    const Vector x = solve_spd(v.factor(), Vector{{2.0, 3.0}});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("solve_spd residual on random SPD matrices") {
    std::mt19937_64 rng(5);
    for (Eigen::Index n : {2, 5, 10, 25, 50}) {
        const auto m = random_model(rng, n);
        const auto v = validate_model(m);
        const Vector b = random_mu(rng, n);
        const Vector x = solve_spd(v.factor(), b);
        const double residual = (m.sigma * x - b).cwiseAbs().maxCoeff();
        CHECK(residual <= 1e-10 * inf_norm(m.sigma) * x.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("the inverse is symmetric positive definite") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + trial % 7;
        const auto v = validate_model(random_model(rng, n));
        Matrix inv(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            inv.col(j) = solve_spd(v.factor(), Vector::Unit(n, j));
        }
        CHECK((inv - inv.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * inv.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inv + inv.transpose()));
        CHECK(es.eigenvalues()[0] > 0.0);
    }
}

TEST_CASE("Cauchy-Schwarz on the aggregates") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = validate_model(random_model(rng, 2 + trial % 5));
        const auto& f = v.factor();
        CHECK(f.A() > 0.0);
        CHECK(f.C() > 0.0);
        CHECK(f.d() >= 0.0);
        CHECK(f.B() * f.B() <= f.A() * f.C() * (1 + 1e-12));
        CHECK(rel_diff(f.d(), f.C() * f.A() - f.B() * f.B()) <= 1e-6);
    }
}

TEST_CASE("d stays non-negative when mu is collinear with ones") {
    std::mt19937_64 rng(8);
    const auto m = make(random_spd(rng, 4), Vector::Constant(4, 0.07));
    const auto v = validate_model(m);
    CHECK(v.factor().d() >= 0.0);
    CHECK(v.returns_collinear_with_ones());
    CHECK_FALSE(validate_model(random_model(rng, 4)).returns_collinear_with_ones());
}

TEST_CASE("asymmetry within tolerance is averaged away") {
    Matrix s = Matrix::Identity(2, 2);
    s(0, 1) = 0.1 + 5e-9;
    s(1, 0) = 0.1;
    const auto v = validate_model(make(s, Vector{{0.1, 0.2}}));
    CHECK(v.sigma()(0, 1) == v.sigma()(1, 0));
    CHECK(v.input_asymmetry() == doctest::Approx(5e-9).epsilon(1e-6));
}

TEST_CASE("structural rejections") {
    Matrix s = Matrix::Identity(2, 2);
    s(0, 1) = 0.1;
    CHECK(kind_of(make(s, Vector{{0.1, 0.2}})) == ErrorKind::AsymmetryBeyondTolerance);

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -0.01;
    CHECK(kind_of(make(neg, Vector{{0.1, 0.2}})) == ErrorKind::NegativeDiagonal);

    CHECK(kind_of(make(Matrix::Identity(3, 3), Vector{{0.1, 0.2}})) == ErrorKind::DimensionMismatch);
    CHECK(kind_of(make(Matrix::Identity(2, 3), Vector{{0.1, 0.2}})) == ErrorKind::DimensionMismatch);

    auto labelled = make(Matrix::Identity(2, 2), Vector{{0.1, 0.2}});
    labelled.labels = {"x"};
    CHECK(kind_of(labelled) == ErrorKind::DimensionMismatch);

    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK(kind_of(make(nan, Vector{{0.1, 0.2}})) == ErrorKind::MalformedInput);
}

TEST_CASE("duplicated asset yields the difference certificate") {
    const auto m = make(Matrix::Constant(2, 2, 0.04), Vector{{0.05, 0.06}});
    for (const auto mode : {SpdMode::Eigen, SpdMode::Breakdown}) {
        ValidationOptions opt;
        opt.spd_mode = mode;
        const Error e = caught(m, opt);
        CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
        REQUIRE(e.certificate());
        const Vector& w = *e.certificate();
        CHECK(w[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(w[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("certificates annihilate constructed singular matrices") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 2 + trial % 7;
        const Eigen::Index rank = 1 + trial % (n - 1);
        const auto m = make(random_singular(rng, n, rank), random_mu(rng, n));
        ValidationOptions opt;
        opt.spd_mode = trial % 2 == 0 ? SpdMode::Eigen : SpdMode::Breakdown;
        const Error e = caught(m, opt);
        REQUIRE(e.certificate());
        const Vector& w = *e.certificate();
        CHECK(std::abs(w.dot(m.sigma * w)) <= 1e-8 * w.squaredNorm() * inf_norm(m.sigma));
        CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("portfolio moments") {
    const auto v = validate_model(make(Matrix::Identity(2, 2), Vector{{0.05, 0.10}}));
    const auto p = portfolio_moments(v, Vector{{0.5, 0.5}});
    CHECK(p.mu == doctest::Approx(0.075).epsilon(1e-15));
    CHECK(p.sigma == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

    const auto raw = portfolio_moments(v.model(), Vector{{2.0, -1.0}});
    CHECK(raw.mu == doctest::Approx(0.0).scale(1.0));
    CHECK(raw.sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("eight-asset fixture aggregates") {
    const auto v = validate_model(eight_asset_model());
    // Reference values from an independent 40-digit LU solve.
    CHECK(rel_diff(v.factor().A(), 217.56904983700649) <= 1e-10);
    CHECK(rel_diff(v.factor().B(), 10.907186430907062) <= 1e-10);
    CHECK(rel_diff(v.factor().C(), 0.8239143329541402) <= 1e-10);
    CHECK(rel_diff(v.factor().d(), 60.291542729360149) <= 1e-9);
    CHECK(v.risk_free() == 0.015);
}
