#include "mvp/estimation.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mvp {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool parse_number(std::string_view text, double& value) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

}  // namespace

ReturnSeries ingest_csv(std::istream& in, bool has_header) {
    ReturnSeries series;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    bool header_pending = has_header;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (header_pending) {
            for (const auto f : fields) {
                series.labels.emplace_back(f);
            }
            width = fields.size();
            header_pending = false;
            continue;
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw Error(ErrorKind::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(width));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(fields[c], row[c])) {
                throw Error(ErrorKind::NonNumericCell,
                            "non-numeric cell at line " + std::to_string(line_no) + ", column " +
                                std::to_string(c + 1) + ": '" + std::string(fields[c]) + "'",
                            CellPosition{line_no, c + 1});
            }
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) {
        throw Error(ErrorKind::EmptyInput, "no data rows in return series");
    }
    if (series.labels.empty()) {
        series.labels = default_labels(width);
    }
    series.observations.resize(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(width));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t c = 0; c < width; ++c) {
            series.observations(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = rows[t][c];
        }
    }
    return series;
}

ReturnSeries ingest_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::MalformedInput, "cannot open " + path.string());
    }
    return ingest_csv(in, has_header);
}

MarketModel estimate_moments(const ReturnSeries& series, int ddof) {
    if (ddof != 0 && ddof != 1) {
        throw std::invalid_argument("ddof must be 0 or 1");
    }
    const Eigen::Index t = series.periods();
    const Eigen::Index n = series.assets();
    if (t < 2 || t < ddof + 1) {
        throw Error(ErrorKind::InsufficientObservations,
                    "need at least 2 observations, got " + std::to_string(t));
    }
    if (!series.labels.empty() && series.labels.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorKind::DimensionMismatch, "label count does not match column count");
    }

    MarketModel model;
    model.labels = series.labels.empty() ? default_labels(static_cast<std::size_t>(n)) : series.labels;
    model.mu = series.observations.colwise().mean().transpose();

    const Matrix centered = series.observations.rowwise() - model.mu.transpose();
    const double denom = static_cast<double>(t - ddof);
    model.sigma.resize(n, n);
    // Upper triangle only, mirrored: the result is bitwise symmetric.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = centered.col(i).dot(centered.col(j)) / denom;
            model.sigma(i, j) = v;
            model.sigma(j, i) = v;
        }
    }
    return model;
}

}  // namespace mvp
