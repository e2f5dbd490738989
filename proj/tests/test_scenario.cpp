#include "doctest.h"

#include <cstdlib>

#include "oracles.hpp"
#include "pcontact/error.hpp"
#include "pcontact/scenario.hpp"

using namespace pcontact;
using nlohmann::json;

namespace {

const char* kReference = R"({
  "name": "scalar E=0",
  "model_tilde": {"kind": "point_interaction", "q_eigenvalues": [0]},
  "model_hat": {"kind": "point_interaction", "q_eigenvalues": [0]},
  "alpha": -1, "beta": -2, "lambda0": -4
})";

ErrorKind parse_error_kind(const std::string& text) {
    try {
        parse_config(json::parse(text));
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

ModelDescriptor random_model(std::mt19937_64& rng, std::size_t d, int flavour) {
    ModelDescriptor m;
    if (flavour == 2 && d == 1) {
        m.kind = ModelDescriptor::Kind::scalar_rational;
        m.rational = {{oracle::uniform(rng, -1, 1), oracle::uniform(rng, 0.5, 2)}, {1.0}};
        m.interval = {-std::numeric_limits<double>::infinity(), oracle::uniform(rng, -1, 1)};
        return m;
    }
    if (flavour == 1) {
        m.q_matrix = oracle::random_hermitian(rng, d);
        return m;
    }
    for (std::size_t k = 0; k < d; ++k) m.q_eigenvalues.push_back(oracle::uniform(rng, -2, 2) / 3.0);
    return m;
}

}  // namespace

TEST_CASE("parses the reference scenario with defaults") {
    const auto cfgs = parse_config(json::parse(kReference));
    REQUIRE(cfgs.size() == 1);
    const ScenarioConfig& c = cfgs.front();
    CHECK(c.name == "scalar E=0");
    CHECK(c.alpha == -1.0);
    CHECK(c.beta == -2.0);
    CHECK(c.lambda0 == -4.0);
    CHECK(std::holds_alternative<GeometricGrid>(c.grid));
    CHECK(c.tolerances == Tolerances{});
    CHECK(c.format == OutputFormat::json);
    CHECK(expand_grid(c).size() == 25);
    const CoupledSystem sys = build_system(c);
    CHECK(resolve_lambda0(c, sys) == -4.0);
}

TEST_CASE("bracketed lambda0 is located") {
    auto j = json::parse(kReference);
    j["lambda0"] = json::array({-10, -1});
    const auto c = parse_scenario(j);
    CHECK(std::abs(resolve_lambda0(c, build_system(c)) + 4.0) < 1e-12);
    j.erase("lambda0");
    const auto none = parse_scenario(j);
    try {
        resolve_lambda0(none, build_system(none));
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
    }
}

TEST_CASE("config errors") {
    auto with = [](auto&& edit) {
        auto j = json::parse(kReference);
        edit(j);
        return j.dump();
    };
    CHECK(parse_error_kind(with([](json& j) { j["colour"] = "red"; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j.erase("alpha"); })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["omega_abs2_grid"] = {1e-4, -1e-3}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["omega_abs2_grid"] = {1e-3, 1e-4}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["model_hat"]["q_eigenvalues"] = {0, 1}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["model_hat"]["kind"] = "spline"; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["output"] = {{"format", "xml"}}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["tolerances"] = {{"root_tol", -1}}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) { j["test_hooks"] = {{"branch_fault", "flip"}}; })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind(with([](json& j) {
              j["model_hat"] = {{"kind", "point_interaction"}, {"q_matrix", {{"re", {{0, 1}, {0, 0}}}}}};
          })) == ErrorKind::ConfigError);
    CHECK(parse_error_kind("[1, 2]") == ErrorKind::ConfigError);
}

TEST_CASE("explicit grid and geometric grid") {
    auto j = json::parse(kReference);
    j["omega_abs2_grid"] = {0.0, 1e-4, 1e-3};
    CHECK(expand_grid(parse_scenario(j)) == std::vector<double>{0.0, 1e-4, 1e-3});
    j["omega_abs2_grid"] = {{"geometric", {{"lo", 1e-5}, {"hi", 1e-2}, {"per_decade", 4}}}};
    CHECK(expand_grid(parse_scenario(j)).size() == 13);
    j["omega_abs2_grid"] = json::array();
    CHECK(expand_grid(parse_scenario(j)).empty());
}

TEST_CASE("tolerance overrides") {
    const Tolerances t = parse_tolerance_overrides("root_tol=1e-10, simple_tol=1e-6", {});
    CHECK(t.root_tol == 1e-10);
    CHECK(t.simple_tol == 1e-6);
    CHECK(t.fd_step == Tolerances{}.fd_step);
    CHECK_THROWS_AS(parse_tolerance_overrides("root_tol", {}), Error);
    CHECK_THROWS_AS(parse_tolerance_overrides("speed=3", {}), Error);
    CHECK(parse_tolerance_overrides("", {}) == Tolerances{});

    setenv("PCONTACT_TOLERANCES", "simple_tol=1e-5", 1);
    CHECK(default_tolerances_from_env().simple_tol == 1e-5);
    unsetenv("PCONTACT_TOLERANCES");
    CHECK(default_tolerances_from_env() == Tolerances{});

    // Values in the file win over the base set.
    auto j = json::parse(kReference);
    j["tolerances"] = {{"root_tol", 1e-11}};
    const auto c = parse_scenario(j, Tolerances{1e-9, 1e-7, 1e-4});
    CHECK(c.tolerances == Tolerances{1e-11, 1e-7, 1e-4});
}

TEST_CASE("round trip through JSON, random configs") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 4;
        ScenarioConfig c;
        c.name = "s" + std::to_string(trial);
        c.model_tilde = random_model(rng, d, trial % 3);
        c.model_hat = random_model(rng, d, (trial / 3) % 3);
        if (c.model_tilde.dim() != c.model_hat.dim()) c.model_hat = random_model(rng, d, 0);
        c.alpha = oracle::uniform(rng, -3, 3) / 7.0;
        c.beta = oracle::uniform(rng, -3, 3) / 7.0;
        if (trial % 2 == 0) {
            c.grid = GeometricGrid{oracle::uniform(rng, 1e-7, 1e-6), oracle::uniform(rng, 1e-3, 1e-2), 3 + trial % 7};
        } else {
            std::vector<double> xs{0.0};
            for (int k = 0; k < 5; ++k) xs.push_back(xs.back() + oracle::uniform(rng, 1e-5, 1e-3) / 3.0);
            c.grid = xs;
        }
        if (trial % 3 == 0) c.lambda0 = oracle::uniform(rng, -5, 0) / 3.0;
        if (trial % 3 == 1) c.lambda0_bracket = Interval{-10.0 / 3.0, -0.1};
        c.tolerances = {oracle::uniform(rng, 1e-13, 1e-10), oracle::uniform(rng, 1e-9, 1e-7), 1e-5 / 3.0};
        c.format = trial % 2 ? OutputFormat::csv : OutputFormat::json;
        if (trial % 5 == 0) c.output_path = "out_" + std::to_string(trial) + ".csv";
        if (trial % 7 == 0) c.fault = BranchFault::swapped_argument;

        const std::string text = to_json(c).dump();
        const auto back = parse_config(json::parse(text));
        REQUIRE(back.size() == 1);
        CHECK(back.front() == c);
    }
}

TEST_CASE("batch documents keep order") {
    json doc;
    doc["scenarios"] = json::array();
    for (int k = 0; k < 3; ++k) {
        auto j = json::parse(kReference);
        j["name"] = "n" + std::to_string(k);
        doc["scenarios"].push_back(j);
    }
    const auto cfgs = parse_config(doc);
    REQUIRE(cfgs.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(cfgs[k].name == "n" + std::to_string(k));
}
