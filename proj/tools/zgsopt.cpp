// Command-line front end: scenario runs, parameter sweeps, parameter
// validation, oracle queries, and scenario listing.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zgsopt/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;      // parse/config errors
constexpr int kExitValidation = 3;  // parameter range or strict-mode bound failure
constexpr int kExitNumerical = 4;   // divergence or numerical failure

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
};

zgs::RunConfig load_config(const CommonArgs& args) {
    zgs::RunConfig cfg;
    if (!args.config_path.empty()) cfg = zgs::parse_config_file(args.config_path);
    zgs::apply_overrides(cfg, args.overrides);
    if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
    return cfg;
}

std::string resolve_output_dir(const zgs::RunConfig& cfg) {
    return cfg.output_dir.empty() ? zgs::default_output_dir() : cfg.output_dir;
}

void print_constants(const zgs::RunResult& r) {
    std::printf("constants: psi=%.6g Psi=%.6g omega=%.6g H=%.6g lambda2_min=%.6g a_min=%.6g\n",
                r.constants.psi, r.constants.Psi, r.constants.omega, r.constants.hess_norm1,
                r.lambda2_min, r.a_min);
}

int cmd_run(const CommonArgs& args) {
    zgs::RunConfig cfg = load_config(args);
    zgs::Scenario sc = zgs::build_scenario(cfg);
    sc.strict = zgs::strict_mode(cfg);

    std::printf("run %s (variant %s)\n", sc.name.c_str(),
                zgs::to_string(sc.params.variant).c_str());
    std::printf("params: eta=%g p=%g T_m=%g c=%g mu=%g k=%g step=%g t_end=%g\n",
                sc.params.eta, sc.params.p, sc.params.T_m, sc.params.c, sc.params.mu,
                sc.params.k, sc.step, sc.t_end);

    zgs::RunResult r = zgs::run_scenario(sc);
    std::fputs(r.validation.to_text().c_str(), stdout);
    if (!r.validation.all_pass()) {
        std::fputs("warning: gain bounds not met (strict mode off)\n", stdout);
    }
    print_constants(r);
    if (r.oracle.has_value()) {
        std::printf("oracle x*: [");
        for (Eigen::Index k = 0; k < r.oracle->x_star.size(); ++k)
            std::printf("%s%.6f", k ? ", " : "", r.oracle->x_star(k));
        std::printf("]  residual %.3g, %d iterations\n", r.oracle->residual,
                    r.oracle->iterations);
    }
    std::fputs(zgs::summary_to_text(r.summary).c_str(), stdout);
    std::printf("wall_seconds: %.3f\n", r.wall_seconds);

    std::string dir = resolve_output_dir(cfg);
    zgs::write_run_outputs(r, dir, zgs::config_to_json(cfg));
    std::printf("outputs: %s/{trajectory.csv, summary.txt, summary.json, validator.txt, "
                "config_echo.json}\n", dir.c_str());
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::string& parameter,
              const std::string& values_text, int workers) {
    std::vector<double> values;
    std::stringstream ss(values_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw zgs::ValidationError("sweep value '" + tok + "' is not a number");
        }
    }
    zgs::RunConfig cfg = load_config(args);
    zgs::Scenario base = zgs::build_scenario(cfg);
    base.strict = zgs::strict_mode(cfg);

    zgs::SweepResult sweep = zgs::run_sweep(base, parameter, values, workers);

    std::string dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        std::ostringstream sub;
        sub << dir << "/sweep_" << parameter << "_" << sweep.values[i];
        zgs::write_run_outputs(sweep.runs[i], sub.str());
        const auto& s = sweep.runs[i].summary;
        std::printf("%s=%g: settle_time=%g within_Tm=%s final_error=%.3g\n", parameter.c_str(),
                    sweep.values[i], s.settle_time, s.within_Tm ? "true" : "false",
                    s.final_error);
    }
    std::string csv = dir + "/sweep.csv";
    zgs::write_sweep_csv(sweep, csv);
    std::printf("combined series: %s\n", csv.c_str());
    return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    zgs::RunConfig cfg = load_config(args);
    zgs::Scenario sc = zgs::build_scenario(cfg);

    std::vector<zgs::ConvexityConstants> per_agent;
    for (const auto& f : sc.costs)
        per_agent.push_back(zgs::estimate_constants(f, sc.constants_box));
    zgs::ConvexityConstants agg = zgs::aggregate_constants(per_agent);
    double lambda2 = sc.schedule.lambda2_min();
    double a_min = sc.schedule.min_positive_weight();

    std::optional<double> dist_bound;
    if (sc.disturbance.has_value()) dist_bound = sc.disturbance->bound_D;
    zgs::ValidationReport rep =
        zgs::validate_params(sc.params, agg, lambda2, static_cast<int>(sc.costs.size()),
                             a_min, dist_bound);

    std::printf("scenario %s (variant %s)\n", sc.name.c_str(),
                zgs::to_string(sc.params.variant).c_str());
    std::printf("constants: psi=%.6g Psi=%.6g omega=%.6g H=%.6g lambda2=%.6g a_min=%.6g\n",
                agg.psi, agg.Psi, agg.omega, agg.hess_norm1, lambda2, a_min);
    std::fputs(rep.to_text().c_str(), stdout);
    std::fputs("minimal compliant gains:\n", stdout);
    for (const auto& check : rep.checks) {
        std::printf("  %s: %.6g\n", check.name.c_str(), check.required);
    }
    return kExitOk;
}

int cmd_oracle(const CommonArgs& args) {
    zgs::RunConfig cfg = load_config(args);
    zgs::Scenario sc = zgs::build_scenario(cfg);

    if (sc.reference) {
        zgs::Vec r0 = sc.reference(0.0);
        zgs::Vec rT = sc.reference(sc.params.T_m);
        std::printf("reference trajectory x*(t) known in closed form\n");
        std::printf("x*(0) = [%.6f, %.6f]\n", r0(0), r0(1));
        std::printf("x*(T_m=%g) = [%.6f, %.6f]\n", sc.params.T_m, rT(0), rT(1));
    }
    zgs::Vec x0 = zgs::Vec::Zero(sc.costs[0].dim);
    zgs::OracleSolution sol = zgs::centralized_minimize(sc.costs, x0, 0.0);
    std::printf("newton x*(t=0): [");
    for (Eigen::Index k = 0; k < sol.x_star.size(); ++k)
        std::printf("%s%.6f", k ? ", " : "", sol.x_star(k));
    std::printf("]  residual %.3g, %d iterations\n", sol.residual, sol.iterations);
    return kExitOk;
}

int cmd_list() {
    for (const std::string& name : zgs::builtin_scenario_names()) {
        zgs::Scenario sc = zgs::make_scenario(name);
        std::printf("%-24s %s\n", name.c_str(), sc.description.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"predefined-time distributed optimization simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, validate_args, oracle_args;
    std::string sweep_parameter, sweep_values;
    int sweep_workers = 0;

    auto add_common = [](CLI::App* cmd, CommonArgs& args) {
        cmd->add_option("--config", args.config_path, "JSON config file");
        cmd->add_option("--output-dir", args.output_dir, "output directory");
        cmd->add_option("overrides", args.overrides, "key=value overrides");
    };

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write outputs");
    add_common(run, run_args);

    CLI::App* sweep = app.add_subcommand("sweep", "one sub-run per parameter value");
    add_common(sweep, sweep_args);
    sweep->add_option("--parameter", sweep_parameter, "one of T_m, c, p, eta")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--workers", sweep_workers, "max parallel sub-runs (0 = auto)");

    CLI::App* validate =
        app.add_subcommand("validate", "print constants and gain bounds, no simulation");
    add_common(validate, validate_args);

    CLI::App* oracle = app.add_subcommand("oracle", "print the centralized optimum");
    add_common(oracle, oracle_args);

    CLI::App* list = app.add_subcommand("list", "enumerate built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args, sweep_parameter, sweep_values,
                                              sweep_workers);
        if (validate->parsed()) return cmd_validate(validate_args);
        if (oracle->parsed()) return cmd_oracle(oracle_args);
        if (list->parsed()) return cmd_list();
    } catch (const zgs::ParameterError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return kExitValidation;
    } catch (const zgs::DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return kExitNumerical;
    } catch (const zgs::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const zgs::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const zgs::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUnexpected;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitUnexpected;
    }
    return kExitUnexpected;
}
