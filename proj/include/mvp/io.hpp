#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/frontier.hpp"
#include "mvp/market_model.hpp"
#include "mvp/optimizer.hpp"
#include "mvp/oracle.hpp"

namespace mvp::io {

using Json = nlohmann::json;

// Model file: {"labels": [..], "mu": [..], "sigma": [[..], ..], "rf": x}
// with "labels" and "rf" optional. Malformed documents throw
// Error(MalformedInput); dimension checks are left to validate_model().
MarketModel model_from_json(const Json& doc);
MarketModel read_model_json(const std::filesystem::path& path);
Json to_json(const MarketModel& model);

// Funds file: either an array or {"funds": [...]}, each entry
// {"weights": [..], "mu0": x} with "mu0" optional.
std::vector<Fund> funds_from_json(const Json& doc);
std::vector<Fund> read_funds_json(const std::filesystem::path& path);

Json to_json(const PortfolioSolution& s);
Json to_json(const FundCombination& c);
Json to_json(const FrontierCoefficients& fc);
Json to_json(const LineSpec& line);
Json to_json(const FrontierPoint& p);
Json to_json(const oracle::OracleReport& r);
Json to_json(const Error& e);

Json vector_to_json(const Vector& v);

}  // namespace mvp::io
