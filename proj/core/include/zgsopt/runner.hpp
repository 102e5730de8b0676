#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zgsopt/config.hpp"
#include "zgsopt/oracle.hpp"
#include "zgsopt/sim.hpp"

namespace zgs {

/// Everything a run produces: sampled constants, validation, trajectory,
/// settling statistics, and (for static problems) the centralized oracle.
struct RunResult {
    Scenario scenario;
    ConvexityConstants constants;
    double lambda2_min = 0.0;
    double a_min = 0.0;
    ValidationReport validation;
    Trajectory trajectory;
    RunSummary summary;
    std::optional<OracleSolution> oracle;
    std::vector<double> ref_error;   // per-sample max_i ||x_i - ref||
    double wall_seconds = 0.0;
};

/// validate -> simulate -> oracle comparison. In strict mode a failed gain
/// bound raises ParameterError before simulation; range violations always do.
RunResult run_scenario(const Scenario& sc);

/// Write trajectory.csv, summary.txt, summary.json, validator.txt and (when
/// config_echo is nonempty) config_echo.json under dir, creating it if needed.
void write_run_outputs(const RunResult& r, const std::string& dir,
                       const std::string& config_echo = "");

struct SweepResult {
    std::string parameter;
    std::vector<double> values;
    std::vector<RunResult> runs;
};

/// One sub-run per value with a shared seed, executed in parallel up to
/// `workers` threads (0 = hardware concurrency). parameter is one of
/// T_m, c, p, eta. Sweeping T_m extends every sub-run to a common horizon so
/// the merged series stay comparable.
SweepResult run_sweep(const Scenario& base, const std::string& parameter,
                      const std::vector<double>& values, int workers = 0);

/// Combined CSV: t, then consensus_err and distance-to-reference series per value.
void write_sweep_csv(const SweepResult& s, const std::string& path);

/// ZGSOPT_OUTPUT_DIR if set, else "zgsopt_out".
std::string default_output_dir();

}  // namespace zgs
