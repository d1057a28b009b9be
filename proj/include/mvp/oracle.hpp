#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mvp/market_model.hpp"

namespace mvp::oracle {

/// Brute-force verification of the closed forms by random search over the
/// constraint set. Nothing here touches the Cholesky factor: objectives are
/// evaluated from Sigma and mu directly.
///
/// Sampling is deterministic in (seed, sample index). Samples are generated
/// in fixed blocks, each with its own seed derived from (seed, block), so
/// results do not depend on how many threads share the work.

enum class Objective { MinVariance, MaxSharpe, TargetReturn };

std::string_view to_string(Objective o);

struct SamplerOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    double spread = 1.0;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// `samples` portfolios W = 1/n + Z, with Z a Gaussian vector (scaled by
/// `spread`) projected onto the zero-sum hyperplane. The first n - 1
/// coordinates are rounded to multiples of 2^-36 and the last one completes
/// the budget, so 1 W^T = 1 holds exactly.
std::vector<Vector> random_constraint_portfolios(std::size_t n, std::size_t samples,
                                                 std::uint64_t seed, double spread);

/// Same as above but also on the plane mu W^T = mu_0 (double projection).
/// The two assets with extreme mu are solved from the rest, leaving both
/// constraints satisfied to rounding.
std::vector<Vector> random_target_portfolios(const Vector& mu, double mu_0, std::size_t samples,
                                             std::uint64_t seed, double spread);

/// `margin` is signed so that a non-negative value means the closed form
/// won: oracle - closed form for variance, closed form - oracle for Sharpe.
struct OracleReport {
    Objective objective = Objective::MinVariance;
    double best_objective = 0.0;
    Vector best_weights;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double closed_form_objective = 0.0;
    double margin = 0.0;

    bool passed(double tol = 1e-9) const { return margin >= -tol; }
};

OracleReport verify_min_variance(const ValidatedModel& model, const SamplerOptions& options = {});
OracleReport verify_max_sharpe(const ValidatedModel& model, double r_f,
                               const SamplerOptions& options = {});
OracleReport verify_target_return(const ValidatedModel& model, double mu_0,
                                  const SamplerOptions& options = {});

}  // namespace mvp::oracle
