#include "zgsopt/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace zgs {

namespace {

Vec mean_initial_state(const Scenario& sc) {
    Vec m = Vec::Zero(sc.costs[0].dim);
    for (const Vec& x : sc.x0) m += x;
    return m / static_cast<double>(sc.x0.size());
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
    RunResult r;
    r.scenario = sc;

    // per-cost constants, deduplicated by cost name (tiled networks reuse them)
    std::map<std::string, ConvexityConstants> by_name;
    std::vector<ConvexityConstants> per_agent;
    per_agent.reserve(sc.costs.size());
    for (const auto& f : sc.costs) {
        auto it = by_name.find(f.name);
        if (it == by_name.end()) {
            it = by_name.emplace(f.name, estimate_constants(f, sc.constants_box)).first;
        }
        per_agent.push_back(it->second);
    }
    r.constants = aggregate_constants(per_agent);
    r.lambda2_min = sc.schedule.lambda2_min();
    r.a_min = sc.schedule.min_positive_weight();

    std::optional<double> dist_bound;
    if (sc.disturbance.has_value()) dist_bound = sc.disturbance->bound_D;
    r.validation = validate_params(sc.params, r.constants, r.lambda2_min,
                                   static_cast<int>(sc.costs.size()), r.a_min, dist_bound);
    if (sc.strict && !r.validation.all_pass()) {
        throw ParameterError("gain bounds failed in strict mode:\n" + r.validation.to_text());
    }

    auto t0 = std::chrono::steady_clock::now();
    r.trajectory = simulate(sc);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::function<Vec(double)> reference = sc.reference;
    if (!reference) {
        r.oracle = centralized_minimize(sc.costs, mean_initial_state(sc), 0.0);
        Vec x_star = r.oracle->x_star;
        reference = [x_star](double) { return x_star; };
    }
    r.summary = summarize(sc, r.trajectory, reference);
    r.ref_error = reference_error_series(r.trajectory, reference);
    return r;
}

void write_run_outputs(const RunResult& r, const std::string& dir,
                       const std::string& config_echo) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_trajectory_csv(r.trajectory, (fs::path(dir) / "trajectory.csv").string());

    // no timings in the files: outputs must be byte-identical for a fixed config
    std::ofstream summary(fs::path(dir) / "summary.txt");
    summary << "scenario: " << r.scenario.name << "\n"
            << "variant: " << to_string(r.scenario.params.variant) << "\n"
            << summary_to_text(r.summary);
    if (r.oracle.has_value()) {
        summary << "oracle_x_star:";
        for (Eigen::Index k = 0; k < r.oracle->x_star.size(); ++k)
            summary << " " << r.oracle->x_star(k);
        summary << "\noracle_residual: " << r.oracle->residual << "\n";
    }
    summary.close();

    std::ofstream sj(fs::path(dir) / "summary.json");
    sj << summary_to_json(r.summary);
    sj.close();

    std::ofstream val(fs::path(dir) / "validator.txt");
    val << r.validation.to_text();
    std::ostringstream cs;
    cs.precision(12);
    cs << "constants: psi=" << r.constants.psi << " Psi=" << r.constants.Psi
       << " omega=" << r.constants.omega << " H=" << r.constants.hess_norm1
       << " lambda2_min=" << r.lambda2_min << " a_min=" << r.a_min << "\n";
    val << cs.str();
    val.close();

    if (!config_echo.empty()) {
        std::ofstream echo(fs::path(dir) / "config_echo.json");
        echo << config_echo;
    }
}

SweepResult run_sweep(const Scenario& base, const std::string& parameter,
                      const std::vector<double>& values, int workers) {
    if (parameter != "T_m" && parameter != "c" && parameter != "p" && parameter != "eta") {
        throw ValidationError("sweep parameter must be one of T_m, c, p, eta; got '" +
                              parameter + "'");
    }
    if (values.empty()) throw ValidationError("sweep: empty value list");

    // common horizon so the merged series share a time grid
    double t_end = base.t_end;
    if (parameter == "T_m") {
        double tail = base.t_end - base.params.T_m;
        for (double v : values) t_end = std::max(t_end, v + tail);
    }

    std::vector<Scenario> scenarios;
    for (double v : values) {
        Scenario sc = base;
        sc.t_end = t_end;
        if (parameter == "T_m") sc.params.T_m = v;
        else if (parameter == "c") sc.params.c = v;
        else if (parameter == "p") sc.params.p = v;
        else sc.params.eta = v;
        scenarios.push_back(std::move(sc));
    }

    SweepResult out;
    out.parameter = parameter;
    out.values = values;
    out.runs.resize(values.size());
    std::vector<std::exception_ptr> errors(values.size());

    unsigned cap = workers > 0 ? static_cast<unsigned>(workers)
                               : std::max(1u, std::thread::hardware_concurrency());
    cap = std::min<unsigned>(cap, values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= values.size()) return;
            try {
                out.runs[idx] = run_scenario(scenarios[idx]);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < cap; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        if (errors[idx]) {
            try {
                std::rethrow_exception(errors[idx]);
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << "sweep " << parameter << "=" << values[idx] << " failed: " << e.what();
                throw Error(os.str());
            }
        }
    }
    return out;
}

void write_sweep_csv(const SweepResult& s, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error("cannot open " + path + " for writing");

    std::fputs("t", fp);
    for (double v : s.values) {
        std::fprintf(fp, ",consensus_err[%s=%g],dist_ref[%s=%g]", s.parameter.c_str(), v,
                     s.parameter.c_str(), v);
    }
    std::fputs("\n", fp);

    std::size_t rows = s.runs.front().trajectory.times.size();
    for (const auto& r : s.runs) rows = std::min(rows, r.trajectory.times.size());
    for (std::size_t k = 0; k < rows; ++k) {
        std::fprintf(fp, "%.17g", s.runs.front().trajectory.times[k]);
        for (const auto& r : s.runs) {
            std::fprintf(fp, ",%.17g,%.17g", r.trajectory.consensus_err[k], r.ref_error[k]);
        }
        std::fputs("\n", fp);
    }
    std::fclose(fp);
}

std::string default_output_dir() {
    if (const char* env = std::getenv("ZGSOPT_OUTPUT_DIR"); env && *env) return env;
    return "zgsopt_out";
}

}  // namespace zgs
