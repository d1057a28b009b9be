#include "mvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "mvp/optimizer.hpp"

namespace mvp::oracle {

namespace {

constexpr std::size_t kBlockSize = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::size_t block) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block) + 0x632BE59BD9B4E019ULL));
}

using Rng = std::mt19937_64;
using Normal = std::normal_distribution<double>;

// Free weights live on a 2^-36 grid so that budget sums are exact.
double snap(double x) {
    return std::ldexp(std::nearbyint(std::ldexp(x, 36)), -36);
}

// 1 W^T = 1; the last weight closes the budget.
struct BudgetPlane {
    Eigen::Index n;
    double spread;

    void draw(Rng& rng, Normal& normal, Vector& z, Vector& w) const {
        const double equal = 1.0 / static_cast<double>(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            z[i] = normal(rng);
        }
        if (spread == 0.0) {
            w.setConstant(equal);
            return;
        }
        const double mean = z.mean();
        double partial = 0.0;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            w[i] = snap(equal + spread * (z[i] - mean));
            partial += w[i];
        }
        w[n - 1] = 1.0 - partial;
    }
};

// 1 W^T = 1 and mu W^T = mu_0: base point plus a Gaussian step projected
// onto the orthogonal complement of span{1, mu}. The assets with the lowest
// and highest mu are then re-solved from the others to remove drift.
struct TargetPlane {
    Vector mu;
    double mu_0;
    Vector base;
    Vector q1;
    Vector q2;
    double spread;
    Eigen::Index lo = 0;
    Eigen::Index hi = 0;

    TargetPlane(const Vector& mu_, double mu_0_, double spread_)
        : mu(mu_), mu_0(mu_0_), spread(spread_) {
        const auto n = mu.size();
        q1 = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        const Vector centered = mu.array() - mu.mean();
        const double norm = centered.norm();
        if (!(norm > 0.0)) {
            throw Error(ErrorKind::DegenerateFrontier, "oracle: mu is constant across assets");
        }
        q2 = centered / norm;
        base = Vector::Constant(n, 1.0 / static_cast<double>(n)) + ((mu_0 - mu.mean()) / norm) * q2;
        mu.minCoeff(&lo);
        mu.maxCoeff(&hi);
    }

    void draw(Rng& rng, Normal& normal, Vector& z, Vector& w) const {
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z[i] = normal(rng);
        }
        z -= q1.dot(z) * q1;
        z -= q2.dot(z) * q2;
        w = base + spread * z;
        double budget = 1.0;
        double target = mu_0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            if (i != lo && i != hi) {
                w[i] = snap(w[i]);
                budget -= w[i];
                target -= mu[i] * w[i];
            }
        }
        w[hi] = (target - mu[lo] * budget) / (mu[hi] - mu[lo]);
        w[lo] = budget - w[hi];
    }
};

struct Best {
    double score = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
    Vector weights;

    bool improves_on(const Best& other) const {
        return score < other.score || (score == other.score && index < other.index);
    }
};

unsigned worker_count(const SamplerOptions& options, std::size_t blocks) {
    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1U, threads);
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(blocks, 1)));
}

// Minimizes `score` over the sampled portfolios.
template <class Plane, class Score>
Best search(const Plane& plane, Eigen::Index n, const SamplerOptions& options, Score score) {
    if (options.samples == 0) {
        throw std::invalid_argument("oracle: samples must be positive");
    }
    const std::size_t blocks = (options.samples + kBlockSize - 1) / kBlockSize;
    const unsigned threads = worker_count(options, blocks);
    std::vector<Best> partial(threads);

    auto work = [&](unsigned t) {
        Vector z(n);
        Vector w(n);
        Best& best = partial[t];
        for (std::size_t b = t; b < blocks; b += threads) {
            Rng rng(block_seed(options.seed, b));
            Normal normal(0.0, 1.0);
            const std::size_t end = std::min(options.samples, (b + 1) * kBlockSize);
            for (std::size_t i = b * kBlockSize; i < end; ++i) {
                plane.draw(rng, normal, z, w);
                const double s = score(w);
                if (s < best.score || (s == best.score && i < best.index)) {
                    best.score = s;
                    best.index = i;
                    best.weights = w;
                }
            }
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    Best merged;
    for (auto& b : partial) {
        if (b.improves_on(merged)) {
            merged = std::move(b);
        }
    }
    return merged;
}

template <class Plane>
std::vector<Vector> collect(const Plane& plane, Eigen::Index n, std::size_t samples,
                            std::uint64_t seed) {
    std::vector<Vector> out;
    out.reserve(samples);
    Vector z(n);
    Vector w(n);
    for (std::size_t b = 0; b * kBlockSize < samples; ++b) {
        Rng rng(block_seed(seed, b));
        Normal normal(0.0, 1.0);
        const std::size_t end = std::min(samples, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) {
            plane.draw(rng, normal, z, w);
            out.push_back(w);
        }
    }
    return out;
}

auto variance_score(const Matrix& sigma) {
    return [&sigma](const Vector& w) { return w.dot(sigma * w); };
}

}  // namespace

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::MinVariance: return "minvar";
        case Objective::MaxSharpe: return "sharpe";
        case Objective::TargetReturn: return "target";
    }
    return "unknown";
}

std::vector<Vector> random_constraint_portfolios(std::size_t n, std::size_t samples,
                                                 std::uint64_t seed, double spread) {
    const auto dim = static_cast<Eigen::Index>(n);
    return collect(BudgetPlane{dim, spread}, dim, samples, seed);
}

std::vector<Vector> random_target_portfolios(const Vector& mu, double mu_0, std::size_t samples,
                                             std::uint64_t seed, double spread) {
    return collect(TargetPlane(mu, mu_0, spread), mu.size(), samples, seed);
}

OracleReport verify_min_variance(const ValidatedModel& model, const SamplerOptions& options) {
    const auto n = static_cast<Eigen::Index>(model.size());
    const PortfolioSolution closed = min_variance_portfolio(model);
    const Best best = search(BudgetPlane{n, options.spread}, n, options, variance_score(model.sigma()));

    OracleReport r;
    r.objective = Objective::MinVariance;
    r.best_objective = best.score;
    r.best_weights = best.weights;
    r.samples = options.samples;
    r.seed = options.seed;
    r.closed_form_objective = closed.sigma * closed.sigma;
    r.margin = r.best_objective - r.closed_form_objective;
    return r;
}

OracleReport verify_max_sharpe(const ValidatedModel& model, double r_f,
                               const SamplerOptions& options) {
    const auto n = static_cast<Eigen::Index>(model.size());
    const PortfolioSolution closed = max_sharpe_portfolio(model, r_f);
    const Vector excess = model.mu().array() - r_f;
    const Matrix& sigma = model.sigma();
    auto negative_sharpe = [&](const Vector& w) {
        const double variance = w.dot(sigma * w);
        if (!(variance > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        return -w.dot(excess) / std::sqrt(variance);
    };
    const Best best = search(BudgetPlane{n, options.spread}, n, options, negative_sharpe);

    OracleReport r;
    r.objective = Objective::MaxSharpe;
    r.best_objective = -best.score;
    r.best_weights = best.weights;
    r.samples = options.samples;
    r.seed = options.seed;
    r.closed_form_objective = *closed.sharpe;
    r.margin = r.closed_form_objective - r.best_objective;
    return r;
}

OracleReport verify_target_return(const ValidatedModel& model, double mu_0,
                                  const SamplerOptions& options) {
    const auto n = static_cast<Eigen::Index>(model.size());
    const PortfolioSolution closed = min_variance_for_return(model, mu_0);
    const Best best = search(TargetPlane(model.mu(), mu_0, options.spread), n, options,
                             variance_score(model.sigma()));

    OracleReport r;
    r.objective = Objective::TargetReturn;
    r.best_objective = best.score;
    r.best_weights = best.weights;
    r.samples = options.samples;
    r.seed = options.seed;
    r.closed_form_objective = closed.sigma * closed.sigma;
    r.margin = r.best_objective - r.closed_form_objective;
    return r;
}

}  // namespace mvp::oracle
