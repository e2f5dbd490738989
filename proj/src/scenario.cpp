#include "pcontact/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pcontact/continuation.hpp"
#include "pcontact/error.hpp"

namespace pcontact {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ConfigError, where + ": " + what);
}

void reject_unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.contains(key)) config_error(where, "unknown key '" + key + "'");
}

double get_finite(const json& j, const std::string& where) {
    if (!j.is_number()) config_error(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) config_error(where, "expected a finite number");
    return v;
}

// Interval ends may be numbers, null (infinite) or the strings "-inf"/"inf".
double get_bound(const json& j, const std::string& where, double infinite_value) {
    if (j.is_null()) return infinite_value;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        config_error(where, "unrecognised bound '" + s + "'");
    }
    return get_finite(j, where);
}

json bound_to_json(double v) {
    if (std::isinf(v)) return v < 0 ? json("-inf") : json("inf");
    return v;
}

std::vector<double> get_number_list(const json& j, const std::string& where) {
    if (!j.is_array()) config_error(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_finite(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

ComplexMatrix parse_dense(const json& j, const std::string& where) {
    reject_unknown_keys(j, where, {"re", "im"});
    if (!j.contains("re")) config_error(where, "dense matrix needs 're'");
    const json& re = j.at("re");
    if (!re.is_array() || re.empty()) config_error(where + ".re", "expected a non-empty square array");
    const std::size_t n = re.size();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = get_number_list(re[r], where + ".re[" + std::to_string(r) + "]");
        if (row.size() != n) config_error(where + ".re", "matrix must be square");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
    }
    if (j.contains("im")) {
        const json& im = j.at("im");
        if (!im.is_array() || im.size() != n) config_error(where + ".im", "must match the shape of 're'");
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = get_number_list(im[r], where + ".im[" + std::to_string(r) + "]");
            if (row.size() != n) config_error(where + ".im", "matrix must be square");
            for (std::size_t c = 0; c < n; ++c) m(r, c) += Complex(0.0, row[c]);
        }
    }
    try {
        (void)HermitianMatrix(m);
    } catch (const Error&) {
        config_error(where, "q_matrix is not Hermitian");
    }
    return m;
}

ModelDescriptor parse_model(const json& j, const std::string& where) {
    if (!j.is_object()) config_error(where, "expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string()) config_error(where, "missing 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    ModelDescriptor d;
    if (kind == "point_interaction") {
        reject_unknown_keys(j, where, {"kind", "q_eigenvalues", "q_matrix"});
        d.kind = ModelDescriptor::Kind::point_interaction;
        if (j.contains("q_matrix")) {
            d.q_matrix = parse_dense(j.at("q_matrix"), where + ".q_matrix");
        }
        if (j.contains("q_eigenvalues")) {
            d.q_eigenvalues = get_number_list(j.at("q_eigenvalues"), where + ".q_eigenvalues");
            if (d.q_eigenvalues.empty()) config_error(where + ".q_eigenvalues", "must not be empty");
        }
        if (!d.q_matrix && d.q_eigenvalues.empty()) config_error(where, "needs 'q_eigenvalues' or 'q_matrix'");
        if (d.q_matrix && !d.q_eigenvalues.empty()) config_error(where, "give either 'q_eigenvalues' or 'q_matrix', not both");
    } else if (kind == "scalar_rational") {
        reject_unknown_keys(j, where, {"kind", "numerator", "denominator", "interval"});
        d.kind = ModelDescriptor::Kind::scalar_rational;
        if (!j.contains("numerator")) config_error(where, "missing 'numerator'");
        d.rational.numerator = get_number_list(j.at("numerator"), where + ".numerator");
        d.rational.denominator = j.contains("denominator")
                                     ? get_number_list(j.at("denominator"), where + ".denominator")
                                     : std::vector<double>{1.0};
        if (d.rational.numerator.empty() || d.rational.denominator.empty())
            config_error(where, "coefficient lists must not be empty");
        if (!j.contains("interval")) config_error(where, "missing 'interval'");
        const json& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2) config_error(where + ".interval", "expected [lo, hi]");
        d.interval = {get_bound(iv[0], where + ".interval[0]", -std::numeric_limits<double>::infinity()),
                      get_bound(iv[1], where + ".interval[1]", std::numeric_limits<double>::infinity())};
        if (d.interval.empty()) config_error(where + ".interval", "empty interval");
    } else {
        config_error(where + ".kind", "unknown model kind '" + kind + "'");
    }
    return d;
}

json model_to_json(const ModelDescriptor& d) {
    json j;
    if (d.kind == ModelDescriptor::Kind::point_interaction) {
        j["kind"] = "point_interaction";
        if (d.q_matrix) {
            const std::size_t n = d.q_matrix->dim();
            json re = json::array(), im = json::array();
            for (std::size_t r = 0; r < n; ++r) {
                json rr = json::array(), ii = json::array();
                for (std::size_t c = 0; c < n; ++c) {
                    rr.push_back((*d.q_matrix)(r, c).real());
                    ii.push_back((*d.q_matrix)(r, c).imag());
                }
                re.push_back(rr);
                im.push_back(ii);
            }
            j["q_matrix"] = {{"re", re}, {"im", im}};
        } else {
            j["q_eigenvalues"] = d.q_eigenvalues;
        }
    } else {
        j["kind"] = "scalar_rational";
        j["numerator"] = d.rational.numerator;
        j["denominator"] = d.rational.denominator;
        j["interval"] = json::array({bound_to_json(d.interval.lo), bound_to_json(d.interval.hi)});
    }
    return j;
}

Tolerances parse_tolerances(const json& j, Tolerances t) {
    const std::string where = "tolerances";
    if (!j.is_object()) config_error(where, "expected an object");
    reject_unknown_keys(j, where, {"root_tol", "simple_tol", "fd_step"});
    auto positive = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        const double v = get_finite(j.at(key), where + "." + key);
        if (!(v > 0.0)) config_error(where + "." + key, "must be positive");
        dst = v;
    };
    positive("root_tol", t.root_tol);
    positive("simple_tol", t.simple_tol);
    positive("fd_step", t.fd_step);
    return t;
}

}  // namespace

std::size_t ModelDescriptor::dim() const {
    if (kind == Kind::scalar_rational) return 1;
    return q_matrix ? q_matrix->dim() : q_eigenvalues.size();
}

ScenarioConfig parse_scenario(const json& j, const Tolerances& base) {
    if (!j.is_object()) config_error("scenario", "expected an object");
    reject_unknown_keys(j, "scenario", {"name", "model_tilde", "model_hat", "alpha", "beta", "omega_abs2_grid", "lambda0",
                                        "tolerances", "output", "test_hooks"});
    ScenarioConfig cfg;
    cfg.tolerances = base;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) config_error("name", "expected a string");
        cfg.name = j.at("name").get<std::string>();
    }
    for (const char* key : {"model_tilde", "model_hat", "alpha", "beta"})
        if (!j.contains(key)) config_error("scenario", std::string("missing '") + key + "'");
    cfg.model_tilde = parse_model(j.at("model_tilde"), "model_tilde");
    cfg.model_hat = parse_model(j.at("model_hat"), "model_hat");
    if (cfg.model_tilde.dim() != cfg.model_hat.dim()) config_error("scenario", "model dimensions differ");
    cfg.alpha = get_finite(j.at("alpha"), "alpha");
    cfg.beta = get_finite(j.at("beta"), "beta");

    if (j.contains("omega_abs2_grid")) {
        const json& g = j.at("omega_abs2_grid");
        if (g.is_array()) {
            auto xs = get_number_list(g, "omega_abs2_grid");
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (xs[i] < 0.0) config_error("omega_abs2_grid", "values must be nonnegative");
                if (i > 0 && !(xs[i] > xs[i - 1])) config_error("omega_abs2_grid", "values must be strictly increasing");
            }
            cfg.grid = std::move(xs);
        } else if (g.is_object()) {
            reject_unknown_keys(g, "omega_abs2_grid", {"geometric"});
            if (!g.contains("geometric") || !g.at("geometric").is_object())
                config_error("omega_abs2_grid", "expected {\"geometric\": {...}}");
            const json& geo = g.at("geometric");
            reject_unknown_keys(geo, "omega_abs2_grid.geometric", {"lo", "hi", "per_decade"});
            GeometricGrid gg;
            if (geo.contains("lo")) gg.lo = get_finite(geo.at("lo"), "omega_abs2_grid.geometric.lo");
            if (geo.contains("hi")) gg.hi = get_finite(geo.at("hi"), "omega_abs2_grid.geometric.hi");
            if (geo.contains("per_decade")) {
                if (!geo.at("per_decade").is_number_integer())
                    config_error("omega_abs2_grid.geometric.per_decade", "expected an integer");
                gg.per_decade = geo.at("per_decade").get<int>();
            }
            if (!(gg.lo > 0.0) || !(gg.hi >= gg.lo) || gg.per_decade < 1)
                config_error("omega_abs2_grid.geometric", "need 0 < lo <= hi and per_decade >= 1");
            cfg.grid = gg;
        } else {
            config_error("omega_abs2_grid", "expected an array or a geometric grid object");
        }
    }

    if (j.contains("lambda0")) {
        const json& l = j.at("lambda0");
        if (l.is_array()) {
            if (l.size() != 2) config_error("lambda0", "bracket must be [lo, hi]");
            Interval b{get_finite(l[0], "lambda0[0]"), get_finite(l[1], "lambda0[1]")};
            if (b.empty()) config_error("lambda0", "bracket must satisfy lo < hi");
            cfg.lambda0_bracket = b;
        } else {
            cfg.lambda0 = get_finite(l, "lambda0");
        }
    }

    if (j.contains("tolerances")) cfg.tolerances = parse_tolerances(j.at("tolerances"), cfg.tolerances);

    if (j.contains("output")) {
        const json& o = j.at("output");
        if (!o.is_object()) config_error("output", "expected an object");
        reject_unknown_keys(o, "output", {"format", "path"});
        if (o.contains("format")) {
            const auto f = o.at("format").is_string() ? o.at("format").get<std::string>() : std::string();
            if (f == "json")
                cfg.format = OutputFormat::json;
            else if (f == "csv")
                cfg.format = OutputFormat::csv;
            else
                config_error("output.format", "expected \"json\" or \"csv\"");
        }
        if (o.contains("path")) {
            if (!o.at("path").is_string()) config_error("output.path", "expected a string");
            cfg.output_path = o.at("path").get<std::string>();
        }
    }

    if (j.contains("test_hooks")) {
        const json& h = j.at("test_hooks");
        if (!h.is_object()) config_error("test_hooks", "expected an object");
        reject_unknown_keys(h, "test_hooks", {"branch_fault"});
        if (h.contains("branch_fault")) {
            const auto f = h.at("branch_fault").is_string() ? h.at("branch_fault").get<std::string>() : std::string();
            if (f == "none")
                cfg.fault = BranchFault::none;
            else if (f == "swapped_argument")
                cfg.fault = BranchFault::swapped_argument;
            else
                config_error("test_hooks.branch_fault", "expected \"none\" or \"swapped_argument\"");
        }
    }
    return cfg;
}

std::vector<ScenarioConfig> parse_config(const json& j, const Tolerances& base) {
    if (j.is_object() && j.contains("scenarios")) {
        if (j.size() != 1) config_error("config", "a batch file holds only 'scenarios'");
        const json& list = j.at("scenarios");
        if (!list.is_array() || list.empty()) config_error("scenarios", "expected a non-empty array");
        std::vector<ScenarioConfig> out;
        for (const auto& s : list) out.push_back(parse_scenario(s, base));
        return out;
    }
    return {parse_scenario(j, base)};
}

std::vector<ScenarioConfig> load_config_file(const std::string& path, const Tolerances& base) {
    std::ifstream in(path);
    if (!in) config_error(path, "cannot open config file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(path, e.what());
    }
    return parse_config(j, base);
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    if (!cfg.name.empty()) j["name"] = cfg.name;
    j["model_tilde"] = model_to_json(cfg.model_tilde);
    j["model_hat"] = model_to_json(cfg.model_hat);
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    if (const auto* gg = std::get_if<GeometricGrid>(&cfg.grid))
        j["omega_abs2_grid"] = {{"geometric", {{"lo", gg->lo}, {"hi", gg->hi}, {"per_decade", gg->per_decade}}}};
    else
        j["omega_abs2_grid"] = std::get<std::vector<double>>(cfg.grid);
    if (cfg.lambda0)
        j["lambda0"] = *cfg.lambda0;
    else if (cfg.lambda0_bracket)
        j["lambda0"] = json::array({cfg.lambda0_bracket->lo, cfg.lambda0_bracket->hi});
    j["tolerances"] = {{"root_tol", cfg.tolerances.root_tol},
                       {"simple_tol", cfg.tolerances.simple_tol},
                       {"fd_step", cfg.tolerances.fd_step}};
    j["output"] = {{"format", cfg.format == OutputFormat::csv ? "csv" : "json"}};
    if (cfg.output_path) j["output"]["path"] = *cfg.output_path;
    if (cfg.fault != BranchFault::none) j["test_hooks"] = {{"branch_fault", "swapped_argument"}};
    return j;
}

Tolerances parse_tolerance_overrides(const std::string& overrides, Tolerances base) {
    std::istringstream in(overrides);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
        const auto eq = item.find('=');
        if (eq == std::string::npos) config_error("PCONTACT_TOLERANCES", "expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            config_error("PCONTACT_TOLERANCES", "bad number '" + val + "'");
        }
        if (!(v > 0.0) || !std::isfinite(v)) config_error("PCONTACT_TOLERANCES", key + " must be positive");
        if (key == "root_tol")
            base.root_tol = v;
        else if (key == "simple_tol")
            base.simple_tol = v;
        else if (key == "fd_step")
            base.fd_step = v;
        else
            config_error("PCONTACT_TOLERANCES", "unknown key '" + key + "'");
    }
    return base;
}

Tolerances default_tolerances_from_env() {
    const char* env = std::getenv("PCONTACT_TOLERANCES");
    return env ? parse_tolerance_overrides(env, Tolerances{}) : Tolerances{};
}

std::vector<double> expand_grid(const ScenarioConfig& cfg) {
    if (const auto* gg = std::get_if<GeometricGrid>(&cfg.grid)) return geometric_grid(gg->lo, gg->hi, gg->per_decade);
    return std::get<std::vector<double>>(cfg.grid);
}

WeylModel build_model(const ModelDescriptor& d, BranchFault fault) {
    if (d.kind == ModelDescriptor::Kind::scalar_rational) return make_scalar_rational(d.rational, d.interval);
    if (d.q_matrix) return make_point_interaction(HermitianMatrix(*d.q_matrix), fault);
    return make_point_interaction(HermitianMatrix::from_real_diagonal(d.q_eigenvalues), fault);
}

CoupledSystem build_system(const ScenarioConfig& cfg) {
    WeylModel tilde = build_model(cfg.model_tilde, cfg.fault);
    WeylModel hat = build_model(cfg.model_hat, cfg.fault);
    return CoupledSystem(std::move(tilde), std::move(hat), CouplingSpec{cfg.alpha, cfg.beta, 0.0, cfg.model_hat.dim()});
}

double resolve_lambda0(const ScenarioConfig& cfg, const CoupledSystem& sys) {
    const ExtensionSpectrumProbe probe = detfun(sys.hat(), cfg.beta);
    if (cfg.lambda0) {
        certify_isolated_eigenvalue(probe, *cfg.lambda0, cfg.tolerances);
        return *cfg.lambda0;
    }
    if (cfg.lambda0_bracket) return find_isolated_eigenvalue(probe, *cfg.lambda0_bracket, cfg.tolerances);
    config_error("lambda0", "scenario must give lambda0 or a bracket [lo, hi]");
}

}  // namespace pcontact
