#include "pcontact/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcontact/continuation.hpp"
#include "pcontact/error.hpp"
#include "pcontact/perturbation.hpp"
#include "pcontact/scenario.hpp"
#include "pcontact/verify.hpp"

namespace pcontact::cli {

namespace {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::NotHermitian:
        case ErrorKind::NotHerglotz:
            return kConfigError;
        case ErrorKind::NewtonDiverged:
        case ErrorKind::BracketLost:
        case ErrorKind::LeftInterval:
        case ErrorKind::InsufficientSamples:
            return kContinuationFailure;
        default:
            return kHypothesisViolation;
    }
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    std::string config_path;
    std::string format;
    std::string out_path;
    std::optional<double> tol_root;
    std::optional<double> tol_simple;
};

std::vector<ScenarioConfig> load(const Options& opt) {
    auto scenarios = load_config_file(opt.config_path, default_tolerances_from_env());
    for (auto& s : scenarios) {
        if (opt.tol_root) s.tolerances.root_tol = *opt.tol_root;
        if (opt.tol_simple) s.tolerances.simple_tol = *opt.tol_simple;
    }
    return scenarios;
}

OutputFormat resolve_format(const Options& opt, const ScenarioConfig& first) {
    if (opt.format == "csv") return OutputFormat::csv;
    if (opt.format == "json") return OutputFormat::json;
    return first.format;
}

/// Writes to --out, else the config's output path, else `out`.
void emit(const Options& opt, const ScenarioConfig& first, const std::string& text, std::ostream& out) {
    std::string path = opt.out_path;
    if (path.empty() && first.output_path) path = *first.output_path;
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write output file " + path);
    f << text;
}

/// Runs `job` on every scenario concurrently; results keep input order and
/// the first failure in input order is rethrown.
template <typename Job>
auto run_batch(const std::vector<ScenarioConfig>& scenarios, Job job) {
    using Result = decltype(job(scenarios.front()));
    std::vector<std::future<Result>> futures;
    futures.reserve(scenarios.size());
    for (const auto& s : scenarios) futures.push_back(std::async(std::launch::async, job, std::cref(s)));
    std::vector<Result> results;
    results.reserve(scenarios.size());
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

json expansion_json(const ExpansionResult& r, const std::string& name) {
    json j;
    if (!name.empty()) j["name"] = name;
    j["lambda0"] = r.lambda0;
    j["a"] = r.a;
    if (r.b) j["b"] = *r.b;
    j["order"] = r.order;
    j["diagnostics"] = {{"dhat_beta_prime", r.diagnostics.dhat_beta_prime}, {"dtilde_alpha", r.diagnostics.dtilde_alpha}};
    return j;
}

ExpansionResult compute_coefficients(const ScenarioConfig& cfg) {
    const CoupledSystem sys = build_system(cfg);
    const double lambda0 = resolve_lambda0(cfg, sys);
    return expansion(sys, lambda0, cfg.tolerances);
}

int cmd_coeffs(const Options& opt, std::ostream& out) {
    const auto scenarios = load(opt);
    const auto results = run_batch(scenarios, compute_coefficients);
    std::ostringstream text;
    if (resolve_format(opt, scenarios.front()) == OutputFormat::csv) {
        text << "lambda0,a,b,order,dhat_beta_prime,dtilde_alpha\n";
        for (const auto& r : results)
            text << fmt17(r.lambda0) << ',' << fmt17(r.a) << ',' << (r.b ? fmt17(*r.b) : std::string()) << ',' << r.order
                 << ',' << fmt17(r.diagnostics.dhat_beta_prime) << ',' << fmt17(r.diagnostics.dtilde_alpha) << '\n';
    } else {
        json j;
        if (results.size() == 1) {
            j = expansion_json(results.front(), scenarios.front().name);
        } else {
            j = json::array();
            for (std::size_t i = 0; i < results.size(); ++i) j.push_back(expansion_json(results[i], scenarios[i].name));
        }
        text << j.dump(2) << '\n';
    }
    emit(opt, scenarios.front(), text.str(), out);
    return kOk;
}

int cmd_branch(const Options& opt, std::ostream& out) {
    const auto scenarios = load(opt);
    if (scenarios.size() != 1) throw Error(ErrorKind::ConfigError, "branch takes a single scenario");
    const ScenarioConfig& cfg = scenarios.front();
    const std::vector<double> xs = expand_grid(cfg);

    const CoupledSystem sys = build_system(cfg);
    const double lambda0 = resolve_lambda0(cfg, sys);
    const ExpansionResult res = expansion(sys, lambda0, cfg.tolerances);

    TrackOptions topts;
    topts.tol = cfg.tolerances;
    topts.seed_slope = res.a;
    const BranchTrace trace = track_branch(sys, lambda0, xs, topts);

    std::ostringstream text;
    if (resolve_format(opt, cfg) == OutputFormat::csv) {
        text << "x,lambda_numeric,lambda_expansion,abs_diff,residual,newton_iters\n";
        for (const auto& s : trace.samples) {
            const double e = evaluate_expansion(res, s.x);
            text << fmt17(s.x) << ',' << fmt17(s.lambda) << ',' << fmt17(e) << ',' << fmt17(std::abs(s.lambda - e)) << ','
                 << fmt17(s.residual) << ',' << s.newton_iters << '\n';
        }
    } else {
        json j;
        if (!cfg.name.empty()) j["name"] = cfg.name;
        j["lambda0"] = lambda0;
        j["expansion"] = expansion_json(res, "");
        j["samples"] = json::array();
        for (const auto& s : trace.samples) {
            const double e = evaluate_expansion(res, s.x);
            j["samples"].push_back({{"x", s.x},
                                    {"lambda_numeric", s.lambda},
                                    {"lambda_expansion", e},
                                    {"abs_diff", std::abs(s.lambda - e)},
                                    {"residual", s.residual},
                                    {"newton_iters", s.newton_iters}});
        }
        try {
            json fitted;
            if (sys.dim() == 1) {
                const FittedCoefficients fc = fit_coefficients(trace, 2, res);
                fitted = {{"a_hat", fc.a_hat}, {"b_hat", *fc.b_hat}, {"remainder_slope", fc.remainder_slope}};
            } else {
                const FittedCoefficients fc = fit_coefficients(trace, 1, res);
                fitted = {{"a_hat", fc.a_hat}, {"remainder_slope", fc.remainder_slope}};
                // No closed form for b when d > 1; this one is purely empirical.
                fitted["b_hat_empirical"] = *fit_coefficients(trace, 2).b_hat;
            }
            j["fitted"] = fitted;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientSamples) throw;
        }
        text << j.dump(2) << '\n';
    }
    emit(opt, cfg, text.str(), out);
    return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
    const auto scenarios = load(opt);
    const auto reports = run_batch(scenarios, run_verification);
    bool all = true;
    std::ostringstream text;
    if (resolve_format(opt, scenarios.front()) == OutputFormat::csv) {
        text << "scenario,check,status,measured,threshold,detail\n";
        for (const auto& r : reports) {
            all = all && r.all_passed();
            for (const auto& c : r.checks) {
                std::string detail = c.detail;
                for (char& ch : detail)
                    if (ch == ',' || ch == '\n') ch = ';';
                text << r.scenario << ',' << c.name << ',' << status_name(c.status) << ',' << fmt17(c.measured) << ','
                     << fmt17(c.threshold) << ',' << detail << '\n';
            }
        }
    } else {
        json arr = json::array();
        for (const auto& r : reports) {
            all = all && r.all_passed();
            json j;
            if (!r.scenario.empty()) j["scenario"] = r.scenario;
            j["passed"] = r.all_passed();
            j["checks"] = json::array();
            for (const auto& c : r.checks) {
                json cj = {{"name", c.name}, {"status", std::string(status_name(c.status))}, {"measured", c.measured},
                           {"threshold", c.threshold}};
                if (!c.detail.empty()) cj["detail"] = c.detail;
                j["checks"].push_back(cj);
            }
            arr.push_back(j);
        }
        text << (arr.size() == 1 ? arr.front() : arr).dump(2) << '\n';
    }
    emit(opt, scenarios.front(), text.str(), out);
    return all ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weak-coupling eigenvalue expansions for point-contact models", "pcontact"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "Scenario file (JSON)")->required();
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", opt.out_path, "Output file (default: config output.path, else stdout)");
        sub->add_option("--tol-root", opt.tol_root, "Root tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--tol-simple", opt.tol_simple, "Simplicity tolerance")->check(CLI::PositiveNumber);
    };
    CLI::App* coeffs = app.add_subcommand("coeffs", "Expansion coefficients lambda0, a (and b when d = 1)");
    CLI::App* branch = app.add_subcommand("branch", "Track the eigenvalue branch numerically and compare");
    CLI::App* verify = app.add_subcommand("verify", "Run the invariant battery on a scenario");
    for (CLI::App* sub : {coeffs, branch, verify}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (coeffs->parsed()) return cmd_coeffs(opt, out);
        if (branch->parsed()) return cmd_branch(opt, out);
        return cmd_verify(opt, out);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace pcontact::cli
