// slr: command-line front end for the stochastic linear regression toolkit.
//
// Subcommands:
//   validate <spec-file>          membership diagnosis of a model file
//   project <spec-file>           projection coefficient, error moments, MSE
//   counterexample <name>         build and verify a named counterexample
//   simulate <spec-file>          OLS consistency run and binned means
//
// Exit codes: 0 success / all checks passed, 1 mathematical failure
// (non-member, singular design, failed claim), 2 usage or parse error.
// Seeds are always explicit arguments; no environment defaults.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slr/slr.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt(const slr::Vector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + ")";
}

json to_json(const slr::Vector& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json to_json(const slr::Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

void print_matrix(const slr::Matrix& m, const std::string& indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::string line = indent + "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) line += ", ";
            line += fmt(m(i, j));
        }
        std::printf("%s]\n", line.c_str());
    }
}

struct CommonArgs {
    std::string format = "text";

    bool json_output() const { return format == "json"; }
};

void add_format_flag(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

// --- validate -----------------------------------------------------------

int run_validate(const std::string& path, const CommonArgs& args) {
    const slr::ModelSpecFile file = slr::parse_model_file(path);
    const slr::RandomVectorSpec spec = slr::to_random_vector_spec(file);
    const slr::ModelDiagnosis diag = slr::validate_fundamental(spec);

    if (args.json_output()) {
        json out;
        out["command"] = "validate";
        out["k"] = spec.k();
        out["y_second_moment"] = diag.y_second_moment;
        out["x_second_moments"] = to_json(diag.x_second_moments);
        out["nondegenerate"] = diag.nondegenerate;
        json pairs = json::array();
        for (const auto& c : diag.orthogonal_set) {
            pairs.push_back({{"i", c.i + 1},
                             {"j", c.j + 1},
                             {"cross_moment", c.value},
                             {"orthogonal", c.orthogonal}});
        }
        out["cross_moments"] = pairs;
        out["gram_pd"] = diag.gram_pd;
        out["is_fundamental"] = diag.is_fundamental;
        out["is_member"] = diag.is_member;
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("model: k = %zu regressor(s) over %zu source(s)\n", spec.k(),
                    spec.sources.size());
        std::printf("E[Y^2] = %s\n", fmt(diag.y_second_moment).c_str());
        for (std::size_t j = 0; j < spec.k(); ++j) {
            std::printf("X_%zu: E[X^2] = %s  %s\n", j + 1,
                        fmt(diag.x_second_moments[j]).c_str(),
                        diag.nondegenerate[j] ? "nondegenerate" : "DEGENERATE AT 0");
        }
        for (const auto& c : diag.orthogonal_set) {
            std::printf("E[X_%zu X_%zu] = %s  %s\n", c.i + 1, c.j + 1, fmt(c.value).c_str(),
                        c.orthogonal ? "orthogonal" : "NOT ORTHOGONAL");
        }
        std::printf("Gram matrix positive definite: %s\n", diag.gram_pd ? "yes" : "no");
        if (diag.is_member) {
            std::printf("verdict: member of M_reg^{1,%zu}\n", spec.k());
        } else {
            std::printf("verdict: NOT a member\n");
        }
    }
    return diag.is_member ? kExitOk : kExitMathFailure;
}

// --- project ------------------------------------------------------------

int run_project(const std::string& path, bool via_orthogonalization,
                const CommonArgs& args) {
    const slr::ModelSpecFile file = slr::parse_model_file(path);
    const slr::RandomVectorSpec spec = slr::to_random_vector_spec(file);
    const slr::ProjectionResult result = slr::decompose(spec.y, spec.x, spec.sources);
    const double error_mean = slr::expectation(result.canonical_error, spec.sources);

    json out;
    bool paths_agree = true;
    double disagreement = 0.0;
    slr::Vector beta_orth;
    slr::Matrix a;
    slr::Vector alpha;

    if (via_orthogonalization) {
        const slr::OrthogonalizationResult orth = slr::orthogonalize(spec.x, spec.sources);
        a = orth.a;
        alpha.resize(spec.k());
        for (std::size_t j = 0; j < spec.k(); ++j) {
            const slr::PolyRandomVariable& xo = orth.orthogonalized[j];
            alpha[j] = slr::expectation(xo * spec.y, spec.sources) /
                       slr::expectation(xo * xo, spec.sources);
        }
        beta_orth = slr::matvec(a.transposed(), alpha);
        disagreement = slr::sup_distance(result.beta, beta_orth);
        paths_agree = disagreement <= 1e-9;
    }

    if (args.json_output()) {
        out["command"] = "project";
        out["beta"] = to_json(result.beta);
        out["gram"] = to_json(result.gram);
        out["cross_moments"] = to_json(result.cross);
        out["error_mean"] = error_mean;
        out["error_second_moment"] = result.mse_at_beta;
        out["mse_at_beta"] = result.mse_at_beta;
        out["regressors_orthogonal"] = result.regressors_orthogonal;
        out["canonical_error"] = result.canonical_error.pruned(1e-12).str();
        if (via_orthogonalization) {
            out["orthogonalization"] = {{"A", to_json(a)},
                                        {"alpha", to_json(alpha)},
                                        {"beta", to_json(beta_orth)},
                                        {"sup_disagreement", disagreement},
                                        {"paths_agree", paths_agree}};
        }
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("beta = %s\n", fmt(result.beta).c_str());
        std::printf("canonical error = %s\n",
                    result.canonical_error.pruned(1e-12).str().c_str());
        std::printf("E[eps] = %s, E[eps^2] = %s\n", fmt(error_mean).c_str(),
                    fmt(result.mse_at_beta).c_str());
        std::printf("MSE at beta = %s\n", fmt(result.mse_at_beta).c_str());
        std::printf("regressor set orthogonal: %s\n",
                    result.regressors_orthogonal ? "yes" : "no");
        if (via_orthogonalization) {
            std::printf("orthogonalizing matrix A:\n");
            print_matrix(a, "  ");
            std::printf("alpha = %s\n", fmt(alpha).c_str());
            std::printf("beta via orthogonalization = %s\n", fmt(beta_orth).c_str());
            std::printf("sup disagreement = %s (%s)\n", fmt(disagreement).c_str(),
                        paths_agree ? "agree" : "DISAGREE");
        }
    }
    return paths_agree ? kExitOk : kExitMathFailure;
}

// --- counterexample -----------------------------------------------------

json report_to_json(const slr::VerificationReport& rep) {
    json out;
    out["case"] = rep.case_name;
    out["mode"] = rep.mode;
    json claims = json::array();
    for (const slr::ClaimResult& r : rep.results) {
        json c;
        c["label"] = r.label;
        c["method"] = r.method;
        if (std::isfinite(r.expected)) c["expected"] = r.expected;
        if (std::isfinite(r.computed)) c["computed"] = r.computed;
        if (r.std_error > 0.0) c["std_error"] = r.std_error;
        if (!r.detail.empty()) c["detail"] = r.detail;
        c["passed"] = r.passed;
        claims.push_back(c);
    }
    out["claims"] = claims;
    out["all_passed"] = rep.all_passed();
    return out;
}

void print_report(const slr::VerificationReport& rep) {
    std::printf("case %s, %s:\n", rep.case_name.c_str(), rep.mode.c_str());
    for (const slr::ClaimResult& r : rep.results) {
        std::string line = "  [" + std::string(r.passed ? "PASS" : "FAIL") + "] " + r.label;
        if (std::isfinite(r.computed)) {
            line += ": computed " + fmt(r.computed);
            if (std::isfinite(r.expected)) line += ", expected " + fmt(r.expected);
            if (r.std_error > 0.0) line += " (std error " + fmt(r.std_error) + ")";
        }
        if (!r.detail.empty()) line += " [" + r.detail + "]";
        std::printf("%s\n", line.c_str());
    }
}

int run_counterexample(const std::string& name, double t, double sigma, bool with_mc,
                       std::size_t mc_n, std::uint64_t mc_seed, const CommonArgs& args) {
    slr::CounterexampleCase c;
    try {
        c = slr::build_named_case(name, t, sigma);
    } catch (const std::invalid_argument&) {
        std::fprintf(stderr, "unknown counterexample '%s'; valid names:\n", name.c_str());
        for (const std::string& n : slr::counterexample_names()) {
            std::fprintf(stderr, "  %s\n", n.c_str());
        }
        return kExitUsage;
    }

    const slr::VerificationReport exact = slr::verify_exact(c);
    bool ok = exact.all_passed();
    json out;
    out["command"] = "counterexample";
    out["exact"] = report_to_json(exact);
    if (!args.json_output()) print_report(exact);

    if (with_mc) {
        const slr::VerificationReport mc = slr::verify_monte_carlo(c, mc_n, mc_seed);
        ok = ok && mc.all_passed();
        out["monte_carlo"] = report_to_json(mc);
        if (!args.json_output()) print_report(mc);
    }
    if (args.json_output()) {
        out["all_passed"] = ok;
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("%s\n", ok ? "all claims passed" : "SOME CLAIMS FAILED");
    }
    return ok ? kExitOk : kExitMathFailure;
}

// --- simulate -----------------------------------------------------------

int run_simulate(const std::string& path, std::size_t n, std::uint64_t seed,
                 const std::vector<std::size_t>& schedule, std::size_t bins,
                 const CommonArgs& args) {
    const slr::ModelSpecFile file = slr::parse_model_file(path);
    const slr::RandomVectorSpec spec = slr::to_random_vector_spec(file);

    const slr::ConsistencyReport rep = slr::consistency_experiment(spec, schedule, seed);

    json out;
    out["command"] = "simulate";
    out["seed"] = seed;
    out["beta"] = to_json(rep.beta);
    json rows = json::array();
    for (const slr::ConsistencyRow& row : rep.rows) {
        rows.push_back({{"n", row.n},
                        {"beta_hat", to_json(row.beta_hat)},
                        {"sup_error", row.sup_error},
                        {"clt_scale", row.clt_scale}});
    }
    out["consistency"] = rows;
    out["decreasing_steps"] = rep.decreasing_steps;
    out["total_steps"] = rep.total_steps;
    out["final_error"] = rep.final_error;

    if (!args.json_output()) {
        std::printf("population beta = %s\n", fmt(rep.beta).c_str());
        std::printf("%10s  %-24s %-14s %s\n", "n", "beta_hat", "sup error",
                    "CLT scale (1 se)");
        for (const slr::ConsistencyRow& row : rep.rows) {
            std::printf("%10zu  %-24s %-14s %s\n", row.n, fmt(row.beta_hat).c_str(),
                        fmt(row.sup_error).c_str(), fmt(row.clt_scale).c_str());
        }
        std::printf("error decreased on %zu of %zu steps; final error = %s\n",
                    rep.decreasing_steps, rep.total_steps, fmt(rep.final_error).c_str());
    }

    // Scalar designs also get the binned conditional mean of Y given X.
    // When the regressor is a bare source the exact regression function
    // of Y on it is available too, and the bins are scored against it.
    if (spec.k() == 1) {
        const bool bare_source = spec.x[0].term_count() == 1 &&
                                 spec.x[0].terms().begin()->first.size() == 1 &&
                                 spec.x[0].terms().begin()->first.begin()->second == 1 &&
                                 spec.x[0].terms().begin()->second == 1.0;
        const slr::SampleMatrix m = slr::sample(spec, n, seed);
        const auto bin_stats =
            slr::empirical_conditional_mean(m.columns[1], m.columns[0], bins);

        std::string source_name;
        slr::ConditionalExpectationForm regression;
        if (bare_source) {
            source_name = spec.x[0].terms().begin()->first.begin()->first;
            regression = slr::conditional_expectation(spec.y, {source_name}, spec.sources);
        }

        std::vector<double> means;
        std::vector<double> predicted;
        json bins_json = json::array();
        for (const slr::BinStat& b : bin_stats) {
            json bin = {{"center", b.center},
                        {"mean", b.mean},
                        {"count", b.count},
                        {"low_count", b.low_count}};
            if (bare_source) {
                const double pred =
                    regression.regression.evaluate({{source_name, b.center}});
                bin["regression_value"] = pred;
                if (b.count >= 30) {
                    means.push_back(b.mean);
                    predicted.push_back(pred);
                }
            }
            bins_json.push_back(bin);
        }
        out["conditional_mean"] = {{"n", n}, {"bins", bins_json}};
        double r2 = 0.0;
        if (bare_source) {
            r2 = means.size() >= 2 ? slr::r_squared(means, predicted) : 0.0;
            out["conditional_mean"]["regression_function"] = regression.regression.str();
            out["conditional_mean"]["r_squared"] = r2;
        }
        if (!args.json_output()) {
            std::printf("\nbinned conditional mean of Y given X_1 (n = %zu):\n", n);
            std::printf("%12s %14s %10s%s\n", "bin center", "mean", "count",
                        bare_source ? "  E(Y|x) exact" : "");
            for (const slr::BinStat& b : bin_stats) {
                std::string extra;
                if (bare_source) {
                    extra = "  " + fmt(regression.regression.evaluate(
                                       {{source_name, b.center}}));
                }
                std::printf("%12s %14s %10zu%s%s\n", fmt(b.center).c_str(),
                            fmt(b.mean).c_str(), b.count, extra.c_str(),
                            b.low_count ? "  (low count)" : "");
            }
            if (bare_source) {
                std::printf("exact regression function: %s\n",
                            regression.regression.str().c_str());
                std::printf("R^2 of bin means against it: %s\n", fmt(r2).c_str());
            }
        }
    }

    if (args.json_output()) std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"population-level stochastic linear regression toolkit"};
    app.require_subcommand(1);

    CommonArgs validate_args;
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "diagnose model membership");
    validate->add_option("spec-file", validate_path, "model specification file")->required();
    add_format_flag(validate, validate_args);

    CommonArgs project_args;
    std::string project_path;
    bool via_orth = false;
    CLI::App* project = app.add_subcommand("project", "orthogonal projection of Y on X");
    project->add_option("spec-file", project_path, "model specification file")->required();
    project->add_flag("--via-orthogonalization", via_orth,
                      "also compute beta through the orthogonalized basis");
    add_format_flag(project, project_args);

    CommonArgs ce_args;
    std::string ce_name;
    double ce_t = 1.0;
    double ce_sigma = 1.0;
    std::vector<std::string> mc_params;
    CLI::App* ce = app.add_subcommand("counterexample", "verify a named counterexample");
    ce->add_option("name", ce_name, "case name")->required();
    ce->add_option("--t", ce_t, "scale parameter t")->check(CLI::PositiveNumber);
    ce->add_option("--sigma", ce_sigma, "gaussian sigma")->check(CLI::PositiveNumber);
    ce->add_option("--mc", mc_params, "Monte Carlo check: sample count and seed")
        ->expected(2);
    add_format_flag(ce, ce_args);

    CommonArgs sim_args;
    std::string sim_path;
    std::size_t sim_n = 0;
    std::uint64_t sim_seed = 0;
    std::vector<std::size_t> sim_schedule;
    std::size_t sim_bins = 20;
    CLI::App* sim = app.add_subcommand("simulate", "OLS consistency experiment");
    sim->add_option("spec-file", sim_path, "model specification file")->required();
    sim->add_option("--n", sim_n, "sample size for the binned conditional mean")
        ->required()
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "sampling seed (required; no implicit default)")
        ->required();
    sim->add_option("--schedule", sim_schedule, "sample sizes for the consistency run")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sim->add_option("--bins", sim_bins, "bin count")->check(CLI::Range(2u, 10000u));
    add_format_flag(sim, sim_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*validate) return run_validate(validate_path, validate_args);
        if (*project) return run_project(project_path, via_orth, project_args);
        if (*ce) {
            const bool with_mc = !mc_params.empty();
            std::size_t mc_n = 0;
            std::uint64_t mc_seed = 0;
            if (with_mc) {
                const auto all_digits = [](const std::string& s) {
                    return !s.empty() &&
                           s.find_first_not_of("0123456789") == std::string::npos;
                };
                if (!all_digits(mc_params[0]) || !all_digits(mc_params[1])) {
                    std::fprintf(stderr, "--mc expects: <sample count> <seed>\n");
                    return kExitUsage;
                }
                try {
                    mc_n = std::stoull(mc_params[0]);
                    mc_seed = std::stoull(mc_params[1]);
                } catch (const std::exception&) {
                    std::fprintf(stderr, "--mc expects: <sample count> <seed>\n");
                    return kExitUsage;
                }
                if (mc_n == 0) {
                    std::fprintf(stderr, "--mc sample count must be positive\n");
                    return kExitUsage;
                }
            }
            return run_counterexample(ce_name, ce_t, ce_sigma, with_mc, mc_n, mc_seed,
                                      ce_args);
        }
        if (*sim) {
            const std::vector<std::size_t> schedule =
                sim_schedule.empty() ? slr::default_schedule() : sim_schedule;
            return run_simulate(sim_path, sim_n, sim_seed, schedule, sim_bins, sim_args);
        }
    } catch (const slr::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitUsage;
    } catch (const slr::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMathFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
