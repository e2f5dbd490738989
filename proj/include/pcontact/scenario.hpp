#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pcontact/contact.hpp"
#include "pcontact/tolerances.hpp"
#include "pcontact/weyl.hpp"

namespace pcontact {

struct ModelDescriptor {
    enum class Kind { point_interaction, scalar_rational };

    Kind kind = Kind::point_interaction;
    /// point_interaction, diagonal form of Q.
    std::vector<double> q_eigenvalues;
    /// point_interaction, optional dense Hermitian Q (takes precedence).
    std::optional<ComplexMatrix> q_matrix;
    /// scalar_rational.
    RationalCoefficients rational;
    Interval interval;

    std::size_t dim() const;
    friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

struct GeometricGrid {
    double lo = 1e-6;
    double hi = 1e-3;
    int per_decade = 8;
    friend bool operator==(const GeometricGrid&, const GeometricGrid&) = default;
};

enum class OutputFormat { json, csv };

/// One scenario as read from a config file. See README for the schema.
struct ScenarioConfig {
    std::string name;
    ModelDescriptor model_tilde;
    ModelDescriptor model_hat;
    double alpha = 0.0;
    double beta = 0.0;
    std::variant<GeometricGrid, std::vector<double>> grid = GeometricGrid{};
    std::optional<double> lambda0;
    std::optional<Interval> lambda0_bracket;
    Tolerances tolerances;
    OutputFormat format = OutputFormat::json;
    std::optional<std::string> output_path;
    BranchFault fault = BranchFault::none;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses one scenario object. Tolerances not present in the object keep the
/// values of `base`. Throws Error{ConfigError}.
ScenarioConfig parse_scenario(const nlohmann::json& j, const Tolerances& base = {});

/// A config document is either one scenario object or {"scenarios": [...]}.
std::vector<ScenarioConfig> parse_config(const nlohmann::json& j, const Tolerances& base = {});
std::vector<ScenarioConfig> load_config_file(const std::string& path, const Tolerances& base = {});

nlohmann::json to_json(const ScenarioConfig& cfg);

/// Applies "root_tol=..,simple_tol=..,fd_step=.." (the PCONTACT_TOLERANCES
/// format) on top of `base`. Throws ConfigError on malformed input.
Tolerances parse_tolerance_overrides(const std::string& overrides, Tolerances base);

/// Defaults overridden by the PCONTACT_TOLERANCES environment variable, if set.
Tolerances default_tolerances_from_env();

std::vector<double> expand_grid(const ScenarioConfig& cfg);
WeylModel build_model(const ModelDescriptor& d, BranchFault fault = BranchFault::none);
CoupledSystem build_system(const ScenarioConfig& cfg);

/// The configured lambda0 (certified), or the root found in the configured
/// bracket. Throws ConfigError when the scenario gives neither.
double resolve_lambda0(const ScenarioConfig& cfg, const CoupledSystem& sys);

}  // namespace pcontact
