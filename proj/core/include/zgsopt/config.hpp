#pragma once

#include <string>
#include <vector>

#include "zgsopt/scenarios.hpp"

namespace zgs {

/// Run configuration: a scenario selector (built-in name or inline JSON
/// definition), an override table with dotted keys, and the output directory.
/// Overrides are type-checked against parameter ranges when the scenario is
/// built. The canonical JSON echo re-parses to an identical RunConfig.
struct RunConfig {
    std::string scenario = "numerical_A";
    std::string inline_scenario;    // canonical JSON text; empty when selecting by name
    std::string overrides = "{}";   // canonical JSON object, dotted keys
    std::string output_dir;         // empty: resolve from ZGSOPT_OUTPUT_DIR or ./zgsopt_out

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_string(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical JSON echo of a config (stable key order, lossless doubles).
std::string config_to_json(const RunConfig& cfg);

/// Apply one "key=value" override (dotted or aliased keys: p, eta, c, T_m, mu,
/// k, variant, step, t_end, seed, boundary_layer, strict_mode, settle_tol, ...).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

/// Apply a list of "key=value" tokens (the CLI's positional overrides).
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& pairs);

/// Resolve the scenario (built-in or inline) and apply the overrides.
/// Throws ParameterError on range violations and ValidationError on unknown
/// keys, bad types, or malformed inline definitions.
Scenario build_scenario(const RunConfig& cfg);

/// Effective strict mode (overrides considered; default true).
bool strict_mode(const RunConfig& cfg);

}  // namespace zgs
