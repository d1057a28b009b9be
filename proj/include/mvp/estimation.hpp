#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "mvp/market_model.hpp"

namespace mvp {

/// T x n matrix of per-period simple returns, one row per period.
struct ReturnSeries {
    std::vector<std::string> labels;
    Matrix observations;

    Eigen::Index periods() const { return observations.rows(); }
    Eigen::Index assets() const { return observations.cols(); }
};

/// Reads a rectangular comma-separated table. Blank lines are skipped; any
/// other irregularity is an Error (EmptyInput, RaggedRows, NonNumericCell).
/// Positions in messages are 1-based line and column numbers.
ReturnSeries ingest_csv(std::istream& in, bool has_header);
ReturnSeries ingest_csv(const std::filesystem::path& path, bool has_header);

/// Column means and the (T - ddof)-normalized sample covariance, computed in
/// two passes. Empty labels default to "A1".."An". The result is not
/// validated; a singular sample covariance surfaces in validate_model().
MarketModel estimate_moments(const ReturnSeries& series, int ddof = 1);

}  // namespace mvp
