#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mvp/io.hpp"
#include "mvp/market_model.hpp"

namespace mvp_test {

using mvp::Matrix;
using mvp::Vector;

inline std::string data_path(const std::string& name) {
    return std::string(MVP_TEST_DATA_DIR) + "/" + name;
}

inline mvp::MarketModel eight_asset_model() {
    return mvp::io::read_model_json(data_path("eight_asset_model.json"));
}

// Well-conditioned SPD matrix with entries of a few percent squared.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            b(i, j) = g(rng);
        }
    }
    Matrix s = 0.04 * (b * b.transpose() / static_cast<double>(n) + 0.2 * Matrix::Identity(n, n));
    return 0.5 * (s + s.transpose());
}

inline Vector random_mu(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(0.02, 0.15);
    Vector mu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu[i] = u(rng);
    }
    return mu;
}

inline mvp::MarketModel random_model(std::mt19937_64& rng, Eigen::Index n) {
    mvp::MarketModel m;
    m.sigma = random_spd(rng, n);
    m.mu = random_mu(rng, n);
    return m;
}

// A rate strictly below mu_sigma_min, so 1 S^-1 mu~ > 0.
inline double rate_below_vertex(const mvp::ValidatedModel& v, double gap = 0.01) {
    return v.factor().mu_sigma_min() - gap;
}

inline double rel_diff(double x, double y) {
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    return std::abs(x - y) / scale;
}

inline double max_abs_diff(const Vector& x, const Vector& y) {
    return (x - y).cwiseAbs().maxCoeff();
}

inline double inf_norm(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Sigma = B B^T with B n x r, r < n: singular by construction.
inline Matrix random_singular(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix b(n, rank);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < rank; ++j) {
            b(i, j) = g(rng);
        }
    }
    Matrix s = 0.01 * b * b.transpose();
    return 0.5 * (s + s.transpose());
}

}  // namespace mvp_test
