#include "mvp/cli.hpp"

#include <cstdio>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mvp/capm.hpp"
#include "mvp/estimation.hpp"
#include "mvp/frontier.hpp"
#include "mvp/io.hpp"
#include "mvp/optimizer.hpp"
#include "mvp/oracle.hpp"

namespace mvp::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string model_path;
    std::string returns_path;
    bool header = false;
    int ddof = 1;
    double sym_tol = 1e-8;
    double pivot_floor = 1e-12;
    std::string spd_mode = "eigen";
};

void add_input_options(CLI::App* sub, InputOptions& in) {
    auto* model = sub->add_option("--model", in.model_path, "Model JSON file (labels, mu, sigma, rf)");
    auto* returns = sub->add_option("--returns", in.returns_path, "CSV of per-period returns");
    model->excludes(returns);
    sub->add_flag("--header", in.header, "First CSV row holds asset labels");
    sub->add_option("--ddof", in.ddof, "Covariance degrees-of-freedom correction")
        ->check(CLI::IsMember({0, 1}))
        ->capture_default_str();
    sub->add_option("--sym-tol", in.sym_tol, "Symmetrization tolerance")->capture_default_str();
    sub->add_option("--pivot-floor", in.pivot_floor, "Relative Cholesky pivot floor")
        ->capture_default_str();
    sub->add_option("--spd-mode", in.spd_mode, "Singularity certificate: eigen | breakdown")
        ->check(CLI::IsMember({"eigen", "breakdown"}))
        ->capture_default_str();
}

MarketModel load_raw(const InputOptions& in) {
    if (in.model_path.empty() == in.returns_path.empty()) {
        throw UsageError("exactly one of --model or --returns is required");
    }
    if (!in.model_path.empty()) {
        return io::read_model_json(in.model_path);
    }
    return estimate_moments(ingest_csv(std::filesystem::path(in.returns_path), in.header), in.ddof);
}

ValidatedModel load_model(const InputOptions& in) {
    ValidationOptions options;
    options.sym_tol = in.sym_tol;
    options.pivot_floor = in.pivot_floor;
    options.spd_mode = in.spd_mode == "breakdown" ? SpdMode::Breakdown : SpdMode::Eigen;
    return validate_model(load_raw(in), options);
}

double resolve_rf(const CLI::Option* flag, double value, const ValidatedModel& model) {
    if (flag->count() > 0) {
        return value;
    }
    if (model.risk_free()) {
        return *model.risk_free();
    }
    throw UsageError("a risk-free rate is required: pass --rf or set \"rf\" in the model");
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_pretty(std::ostream& out, const Json& value, const std::vector<std::string>& labels,
                  int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, item] : value.items()) {
        if (item.is_object()) {
            out << pad << key << ":\n";
            print_pretty(out, item, labels, indent + 2);
        } else if (item.is_array() && !item.empty() && item[0].is_number() &&
                   (key == "weights" || key == "best_weights" || key == "certificate") &&
                   item.size() == labels.size()) {
            out << pad << key << ":\n";
            for (std::size_t i = 0; i < item.size(); ++i) {
                out << pad << "  " << std::left << std::setw(12) << labels[i] << std::right
                    << std::setw(14) << format_number(item[i].get<double>()) << "\n";
            }
        } else if (item.is_array() && !item.empty() && item[0].is_object()) {
            out << pad << key << ": " << item.size() << " entries\n";
            std::size_t i = 0;
            for (const auto& entry : item) {
                out << pad << "  [" << i++ << "]\n";
                print_pretty(out, entry, labels, indent + 4);
            }
        } else if (item.is_number_float()) {
            out << pad << key << ": " << format_number(item.get<double>()) << "\n";
        } else {
            out << pad << key << ": " << item.dump() << "\n";
        }
    }
}

struct Emitter {
    std::ostream& out;
    bool pretty = false;
    std::vector<std::string> labels;

    void operator()(const Json& doc) const {
        if (pretty && doc.is_object()) {
            print_pretty(out, doc, labels, 0);
        } else {
            out << doc.dump(2) << "\n";
        }
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean-variance portfolio analytics", args.empty() ? "mvp" : args[0]};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");

    InputOptions input;
    std::function<void(Emitter&)> action;

    auto model_command = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        add_input_options(sub, input);
        return sub;
    };

    // validate
    {
        CLI::App* sub = model_command("validate", "Check and factorize the covariance matrix");
        sub->callback([&] {
            action = [&](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                emit.labels = m.labels();
                const SpdFactor& f = m.factor();
                emit(Json{{"valid", true},
                          {"n", m.size()},
                          {"labels", m.labels()},
                          {"A", f.A()},
                          {"B", f.B()},
                          {"C", f.C()},
                          {"d", f.d()},
                          {"mu_sigma_min", f.mu_sigma_min()},
                          {"max_asymmetry", m.input_asymmetry()},
                          {"collinear", m.returns_collinear_with_ones()}});
            };
        });
    }

    // estimate
    double estimate_rf = 0.0;
    {
        CLI::App* sub = model_command("estimate", "Estimate a model JSON from a returns CSV");
        auto* rf = sub->add_option("--rf", estimate_rf, "Risk-free rate to embed in the model");
        sub->callback([&, rf] {
            action = [&, rf](Emitter& emit) {
                if (input.returns_path.empty()) {
                    throw UsageError("estimate requires --returns");
                }
                MarketModel m = load_raw(input);
                if (rf->count() > 0) {
                    m.risk_free = estimate_rf;
                }
                emit.labels = m.labels;
                emit(io::to_json(m));
            };
        });
    }

    // minvar
    {
        CLI::App* sub = model_command("minvar", "Global minimum-variance portfolio");
        sub->callback([&] {
            action = [&](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                emit.labels = m.labels();
                emit(io::to_json(min_variance_portfolio(m)));
            };
        });
    }

    // tangency
    double tangency_rf = 0.0;
    {
        CLI::App* sub = model_command("tangency", "Maximal Sharpe ratio portfolio and tangent line");
        auto* rf = sub->add_option("--rf", tangency_rf, "Risk-free rate");
        sub->callback([&, rf] {
            action = [&, rf](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                emit.labels = m.labels();
                const TangentLine t = tangent_line(m, resolve_rf(rf, tangency_rf, m));
                emit(Json{{"portfolio", io::to_json(t.portfolio)},
                          {"slope", t.line.slope},
                          {"intercept", t.line.intercept},
                          {"sigma_m", t.sigma_m},
                          {"mu_m", t.mu_m}});
            };
        });
    }

    // target
    double target_mu0 = 0.0;
    double target_rf = 0.0;
    {
        CLI::App* sub = model_command("target", "Minimum variance for a target return");
        sub->add_option("--mu0", target_mu0, "Target expected return")->required();
        auto* rf = sub->add_option("--rf", target_rf, "Include a risk-free asset at this rate");
        sub->callback([&, rf] {
            action = [&, rf](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                emit.labels = m.labels();
                emit(io::to_json(rf->count() > 0 ? min_variance_with_riskfree(m, target_rf, target_mu0)
                                                 : min_variance_for_return(m, target_mu0)));
            };
        });
    }

    // frontier
    double lo = 0.0;
    double hi = 0.0;
    int k = 50;
    double frontier_rf = 0.0;
    bool include_inefficient = false;
    std::string format = "json";
    {
        CLI::App* sub = model_command("frontier", "Sample the frontier and the capital market line");
        sub->add_option("--lo", lo, "Lowest expected return")->required();
        sub->add_option("--hi", hi, "Highest expected return")->required();
        sub->add_option("--k", k, "Number of samples")->capture_default_str();
        auto* rf = sub->add_option("--rf", frontier_rf, "Risk-free rate for the capital market line");
        sub->add_flag("--include-inefficient", include_inefficient,
                      "Sample the whole minimum variance frontier");
        sub->add_option("--format", format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->callback([&, rf] {
            action = [&, rf](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                const auto points = sample_frontier(m, lo, hi, k, include_inefficient);
                if (format == "csv") {
                    write_frontier_csv(emit.out, points);
                    return;
                }
                Json doc;
                doc["coefficients"] = io::to_json(frontier_coefficients(m));
                Json arr = Json::array();
                for (const auto& p : points) {
                    arr.push_back(io::to_json(p));
                }
                doc["points"] = std::move(arr);
                if (rf->count() > 0 || m.risk_free()) {
                    doc["cml"] = io::to_json(cml_line(m, resolve_rf(rf, frontier_rf, m)));
                }
                emit.labels = m.labels();
                emit(doc);
            };
        });
    }

    // separate
    std::string funds_path;
    std::vector<double> coeffs;
    Tolerances separate_tol;
    {
        CLI::App* sub = model_command("separate", "Combine efficient funds");
        sub->add_option("--funds", funds_path, "Funds JSON file")->required();
        sub->add_option("--coeffs", coeffs, "Comma-separated fund coefficients")
            ->required()
            ->delimiter(',');
        sub->add_option("--coeff-tol", separate_tol.coefficient_sum, "Tolerance on sum of coefficients")
            ->capture_default_str();
        sub->add_option("--fund-tol", separate_tol.fund_budget, "Tolerance on each fund's budget")
            ->capture_default_str();
        sub->callback([&] {
            action = [&](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                const auto funds = io::read_funds_json(funds_path);
                emit.labels = m.labels();
                emit(io::to_json(combine_funds(m, funds, coeffs, separate_tol)));
            };
        });
    }

    // capm
    double capm_rf = 0.0;
    double capm_mus = 0.0;
    double capm_beta = 0.0;
    double capm_cov = 0.0;
    double capm_var = 0.0;
    double capm_observed = 0.0;
    double capm_tol = capm::kDefaultClassifyTol;
    {
        CLI::App* sub = app.add_subcommand("capm", "CAPM expected return and SML classification");
        sub->fallthrough();
        sub->add_option("--rf", capm_rf, "Risk-free rate")->required();
        sub->add_option("--mus", capm_mus, "Expected return of the systemic portfolio")->required();
        auto* beta = sub->add_option("--beta", capm_beta, "Asset beta");
        auto* cov = sub->add_option("--cov", capm_cov, "cov(r_A, r_S), used with --var");
        auto* var = sub->add_option("--var", capm_var, "Variance of the systemic portfolio");
        cov->needs(var);
        var->needs(cov);
        beta->excludes(cov);
        auto* observed = sub->add_option("--observed", capm_observed, "Observed expected return");
        sub->add_option("--tol", capm_tol, "Classification tolerance")->capture_default_str();
        sub->callback([&, beta, cov, observed] {
            action = [&, beta, cov, observed](Emitter& emit) {
                if (beta->count() == 0 && cov->count() == 0) {
                    throw UsageError("capm requires --beta or --cov/--var");
                }
                const double b = beta->count() > 0 ? capm_beta : capm::beta(capm_cov, capm_var);
                Json doc{{"beta", b}, {"expected_return", capm::expected_return(capm_rf, b, capm_mus)}};
                doc["classification"] =
                    observed->count() > 0
                        ? Json(std::string(capm::to_string(
                              capm::sml_classify(capm_observed, b, capm_rf, capm_mus, capm_tol))))
                        : Json(nullptr);
                emit(doc);
            };
        });
    }

    // oracle-check
    std::string objective = "minvar";
    double oracle_rf = 0.0;
    double oracle_mu0 = 0.0;
    oracle::SamplerOptions sampler;
    {
        CLI::App* sub = model_command("oracle-check", "Random-search verification of a closed form");
        sub->add_option("--objective", objective, "minvar | sharpe | target")
            ->check(CLI::IsMember({"minvar", "sharpe", "target"}))
            ->capture_default_str();
        auto* rf = sub->add_option("--rf", oracle_rf, "Risk-free rate (sharpe)");
        auto* mu0 = sub->add_option("--mu0", oracle_mu0, "Target return (target)");
        sub->add_option("--samples", sampler.samples, "Number of samples")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", sampler.seed, "Random seed")->capture_default_str();
        sub->add_option("--spread", sampler.spread, "Scale of the random steps")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        sub->add_option("--threads", sampler.threads, "Worker threads (0: all cores)")
            ->capture_default_str();
        sub->callback([&, rf, mu0] {
            action = [&, rf, mu0](Emitter& emit) {
                const ValidatedModel m = load_model(input);
                emit.labels = m.labels();
                oracle::OracleReport report;
                if (objective == "minvar") {
                    report = oracle::verify_min_variance(m, sampler);
                } else if (objective == "sharpe") {
                    report = oracle::verify_max_sharpe(m, resolve_rf(rf, oracle_rf, m), sampler);
                } else {
                    if (mu0->count() == 0) {
                        throw UsageError("--objective target requires --mu0");
                    }
                    report = oracle::verify_target_return(m, oracle_mu0, sampler);
                }
                Json doc = io::to_json(report);
                doc["spread"] = sampler.spread;
                emit(doc);
            };
        });
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    if (argv.empty()) {
        argv.push_back("mvp");
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    Emitter emit{out, pretty, {}};
    try {
        action(emit);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const Error& e) {
        emit(io::to_json(e));
        return is_degenerate_math(e.kind()) ? kDegenerate : kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

}  // namespace mvp::cli
