#include "mvp/io.hpp"

#include <fstream>

namespace mvp::io {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorKind::MalformedInput, what);
}

Vector numbers(const Json& j, const char* field) {
    if (!j.is_array()) {
        malformed(std::string("'") + field + "' must be an array of numbers");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            malformed(std::string("'") + field + "' entry " + std::to_string(i) + " is not a number");
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        malformed("cannot open " + path.string());
    }
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        malformed("invalid JSON in " + path.string());
    }
    return doc;
}

}  // namespace

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v[i]);
    }
    return arr;
}

MarketModel model_from_json(const Json& doc) {
    if (!doc.is_object()) {
        malformed("model document must be a JSON object");
    }
    if (!doc.contains("mu") || !doc.contains("sigma")) {
        malformed("model requires 'mu' and 'sigma'");
    }
    MarketModel m;
    m.mu = numbers(doc.at("mu"), "mu");

    const Json& rows = doc.at("sigma");
    if (!rows.is_array()) {
        malformed("'sigma' must be an array of rows");
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    std::size_t width = rows.empty() ? 0 : rows[0].size();
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != width) {
            malformed("'sigma' rows must be arrays of equal length");
        }
    }
    m.sigma.resize(n, static_cast<Eigen::Index>(width));
    for (Eigen::Index i = 0; i < n; ++i) {
        m.sigma.row(i) = numbers(rows[static_cast<std::size_t>(i)], "sigma").transpose();
    }

    if (doc.contains("labels")) {
        const Json& labels = doc.at("labels");
        if (!labels.is_array()) {
            malformed("'labels' must be an array of strings");
        }
        for (const auto& l : labels) {
            if (!l.is_string()) {
                malformed("'labels' must be an array of strings");
            }
            m.labels.push_back(l.get<std::string>());
        }
    }
    if (doc.contains("rf") && !doc.at("rf").is_null()) {
        if (!doc.at("rf").is_number()) {
            malformed("'rf' must be a number");
        }
        m.risk_free = doc.at("rf").get<double>();
    }
    return m;
}

MarketModel read_model_json(const std::filesystem::path& path) {
    return model_from_json(parse_file(path));
}

Json to_json(const MarketModel& model) {
    Json doc;
    doc["labels"] = model.labels;
    doc["mu"] = vector_to_json(model.mu);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < model.sigma.rows(); ++i) {
        rows.push_back(vector_to_json(model.sigma.row(i).transpose()));
    }
    doc["sigma"] = std::move(rows);
    if (model.risk_free) {
        doc["rf"] = *model.risk_free;
    }
    return doc;
}

std::vector<Fund> funds_from_json(const Json& doc) {
    const Json& list = doc.is_object() && doc.contains("funds") ? doc.at("funds") : doc;
    if (!list.is_array()) {
        malformed("funds document must be an array or {\"funds\": [...]}");
    }
    std::vector<Fund> funds;
    for (const auto& entry : list) {
        Fund f;
        if (entry.is_array()) {
            f.weights = numbers(entry, "weights");
        } else if (entry.is_object() && entry.contains("weights")) {
            f.weights = numbers(entry.at("weights"), "weights");
            if (entry.contains("mu0") && !entry.at("mu0").is_null()) {
                if (!entry.at("mu0").is_number()) {
                    malformed("'mu0' must be a number");
                }
                f.expected_return = entry.at("mu0").get<double>();
            }
        } else {
            malformed("each fund needs a 'weights' array");
        }
        funds.push_back(std::move(f));
    }
    return funds;
}

std::vector<Fund> read_funds_json(const std::filesystem::path& path) {
    return funds_from_json(parse_file(path));
}

Json to_json(const PortfolioSolution& s) {
    Json doc;
    doc["weights"] = vector_to_json(s.weights);
    if (s.risk_free_weight) {
        doc["wf"] = *s.risk_free_weight;
    }
    doc["mu"] = s.mu;
    doc["sigma"] = s.sigma;
    doc["sharpe"] = s.sharpe ? Json(*s.sharpe) : Json(nullptr);
    doc["kkt_residual"] = s.kkt_residual;
    Json warnings = Json::array();
    for (const auto w : s.warnings) {
        warnings.push_back(std::string(to_string(w)));
    }
    doc["warnings"] = std::move(warnings);
    return doc;
}

Json to_json(const FundCombination& c) {
    return {{"portfolio", to_json(c.portfolio)}, {"target", c.target}, {"efficient", c.efficient}};
}

Json to_json(const FrontierCoefficients& fc) {
    return {{"a", fc.a},
            {"b", fc.b},
            {"c", fc.c},
            {"d", fc.d},
            {"mu_sigma_min", fc.mu_sigma_min},
            {"sigma_min", fc.sigma_min}};
}

Json to_json(const LineSpec& line) {
    return {{"slope", line.slope}, {"intercept", line.intercept}};
}

Json to_json(const FrontierPoint& p) {
    return {{"mu", p.mu}, {"sigma", p.sigma}, {"efficient", p.efficient},
            {"weights", vector_to_json(p.weights)}};
}

Json to_json(const oracle::OracleReport& r) {
    return {{"objective", std::string(oracle::to_string(r.objective))},
            {"best_objective", r.best_objective},
            {"best_weights", vector_to_json(r.best_weights)},
            {"samples", r.samples},
            {"seed", r.seed},
            {"closed_form_objective", r.closed_form_objective},
            {"margin", r.margin},
            {"passed", r.passed()}};
}

Json to_json(const Error& e) {
    Json doc;
    doc["error"] = std::string(to_string(e.kind()));
    doc["message"] = e.what();
    if (e.certificate()) {
        doc["certificate"] = vector_to_json(*e.certificate());
    }
    if (e.position()) {
        doc["line"] = e.position()->line;
        doc["column"] = e.position()->column;
    }
    return doc;
}

}  // namespace mvp::io
