#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace mvp {

enum class ErrorKind {
    // Input and validation failures.
    DimensionMismatch,
    AsymmetryBeyondTolerance,
    NotPositiveDefinite,
    NegativeDiagonal,
    MalformedInput,
    RaggedRows,
    NonNumericCell,
    EmptyInput,
    InsufficientObservations,
    CoefficientSumViolation,
    InvalidRange,
    NonPositiveSystemicVariance,
    // Degenerate mathematics on a valid model.
    ZeroExcessReturns,
    TangencyUndefined,
    NegativeTangency,
    DegenerateFrontier,
    EqualFundReturns,
    ZeroVariancePortfolio,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds caused by degenerate geometry rather than bad input.
bool is_degenerate_math(ErrorKind kind);

/// 1-based line and column of an offending input cell.
struct CellPosition {
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Single exception type for every library failure. NotPositiveDefinite
/// carries a unit-norm certificate W with W Sigma W^T close to zero, i.e. a
/// portfolio whose return is almost surely constant.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Error(ErrorKind kind, const std::string& message, Eigen::VectorXd certificate)
        : std::runtime_error(message), kind_(kind), certificate_(std::move(certificate)) {}

    Error(ErrorKind kind, const std::string& message, CellPosition position)
        : std::runtime_error(message), kind_(kind), position_(position) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<CellPosition>& position() const noexcept { return position_; }
    const std::optional<Eigen::VectorXd>& certificate() const noexcept { return certificate_; }

private:
    ErrorKind kind_;
    std::optional<Eigen::VectorXd> certificate_;
    std::optional<CellPosition> position_;
};

/// Numerical thresholds shared by the optimizer and frontier routines.
/// Every value is a default; callers may override any field.
struct Tolerances {
    double zero_excess = 1e-12;      // ||mu - r_f 1||_inf below this is "zero excess returns"
    double tangency = 1e-12;         // |1 S^-1 mu~| < tangency * ||S^-1 mu~||_1 is undefined
    double degenerate = 1e-12;       // d <= degenerate * C * A is a collinear frontier
    double equal_funds = 1e-14;      // relative gap between two fund returns
    double coefficient_sum = 1e-6;   // |sum coeffs - 1|
    double fund_budget = 1e-6;       // |1 W_i - 1| for each supplied fund
    double efficiency = 1e-6;        // relative sigma gap to the frontier
};

}  // namespace mvp
