#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zgsopt/costs.hpp"
#include "zgsopt/dynamics.hpp"
#include "zgsopt/graph.hpp"

namespace zgs {

struct Tolerances {
    double settle = 1e-2;   // default for static runs; 5e-2 for time-varying
    double zgs = 5e-3;      // gradient-sum norm band after the reach phase
    double slide = 1e-3;    // per-agent ||s_i|| at the end of the reach phase
};

struct Scenario {
    std::string name;
    std::string description;

    std::vector<CostFunction> costs;
    SwitchingSchedule schedule = SwitchingSchedule::single(ring_topology(2));
    AlgorithmParams params;
    std::vector<Vec> x0;
    double t_end = 2.5;
    double step = 1e-3;
    std::optional<Disturbance> disturbance;

    /// Known optimal trajectory (time-varying runs); null for static runs,
    /// where the centralized oracle provides the reference.
    std::function<Vec(double)> reference;

    Tolerances tol;
    std::uint64_t seed = 1;
    DomainBox constants_box = DomainBox::centered(2, 5.0);
    bool strict = true;
};

/// Time series of a run. All series share length; times[k] = k * step.
/// states[k] and sliding[k] are dim x n_agents matrices (one column per agent).
struct Trajectory {
    std::vector<double> times;
    std::vector<Mat> states;
    std::vector<Mat> sliding;
    std::vector<double> grad_sum_norm;   // ||sum_i grad f_i(x_i, t)||
    std::vector<double> global_cost;     // sum_i f_i(x_i, t)
    std::vector<double> consensus_err;   // max_{i,j} ||x_i - x_j||

    double max_step_jump = 0.0;   // largest single-step state change (stiffness telltale)
    double zgs_drift = 0.0;       // max over steps of ||sum_i zetadot_i|| / max(1, sum_i ||zetadot_i||)

    int n_agents() const { return states.empty() ? 0 : static_cast<int>(states.front().cols()); }
    int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().rows()); }
};

/// Fixed-step forward Euler with simultaneous (Jacobi) state updates and the
/// topology re-queried from the schedule every step. Throws DivergenceError
/// on a non-finite state component and propagates SingularHessianError with
/// the offending time.
Trajectory simulate(const Scenario& sc);

struct RunSummary {
    double settle_time = 0.0;  // first t with max_i ||x_i(tau) - ref(tau)|| <= tol for all tau >= t
    double zgs_time = 0.0;     // first t with grad_sum_norm <= tol thereafter
    bool within_Tm = false;
    double max_step_jump = 0.0;
    double zgs_drift = 0.0;
    double final_error = 0.0;       // max_i ||x_i(t_end) - ref(t_end)||
    Vec consensus_point;            // mean of final agent states
    double slide_at_eta_Tm = 0.0;   // max_i ||s_i(eta T_m)||
    double sup_grad_sum_after_reach = 0.0;
};

/// Per-sample max_i ||x_i(t) - reference(t)||.
std::vector<double> reference_error_series(const Trajectory& traj,
                                           const std::function<Vec(double)>& reference);

/// Settling and manifold statistics against a reference trajectory
/// (constant x* for static runs). Infinity marks "never settled".
RunSummary summarize(const Scenario& sc, const Trajectory& traj,
                     const std::function<Vec(double)>& reference);

/// Trajectory CSV: header row
///   t, x{i}_{k} per agent per component, s{i}_norm per agent,
///   grad_sum_norm, global_cost, consensus_err
/// with 17 significant digits (lossless double round-trip).
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

std::string summary_to_text(const RunSummary& s);
std::string summary_to_json(const RunSummary& s);

}  // namespace zgs
