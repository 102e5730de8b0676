#include "zgsopt/sim.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_scenario(const Scenario& sc) {
    const int n = static_cast<int>(sc.costs.size());
    if (n == 0) throw ValidationError("scenario: no cost functions");
    if (sc.schedule.n_agents() != n) {
        std::ostringstream os;
        os << "scenario: " << n << " costs but topology has " << sc.schedule.n_agents()
           << " nodes";
        throw ValidationError(os.str());
    }
    if (static_cast<int>(sc.x0.size()) != n) {
        throw ValidationError("scenario: x0 must have one vector per agent");
    }
    if (!(sc.step > 0.0)) throw ValidationError("scenario: step must be positive");
    if (sc.t_end < sc.params.T_m) {
        std::ostringstream os;
        os << "scenario: t_end = " << sc.t_end << " must cover T_m = " << sc.params.T_m;
        throw ValidationError(os.str());
    }
    const int dim = sc.costs[0].dim;
    for (const auto& f : sc.costs) {
        if (f.dim != dim) throw ValidationError("scenario: mixed cost dimensions");
    }
    for (const auto& v : sc.x0) {
        if (v.size() != dim) throw ValidationError("scenario: x0 dimension mismatch");
    }
    check_param_ranges(sc.params);
    if (sc.params.variant == Variant::disturbance && !sc.disturbance.has_value()) {
        throw ValidationError("scenario: disturbance variant needs a disturbance");
    }
}

// identical-Hessian requirement of the time-varying algorithm, probed at the
// initial states and at one shifted point/time
void check_identical_hessians(const Scenario& sc) {
    const int n = static_cast<int>(sc.costs.size());
    for (int probe = 0; probe < 2; ++probe) {
        double t = probe == 0 ? 0.0 : 0.7;
        Mat ref;
        for (int i = 0; i < n; ++i) {
            const Vec& x = probe == 0 ? sc.x0[i] : sc.x0[(i + 1) % n];
            Mat h = sc.costs[i].hessian(x, t);
            if (i == 0) {
                ref = h;
            } else if ((h - ref).cwiseAbs().maxCoeff() > 1e-9) {
                std::ostringstream os;
                os << "time-varying variant requires identical Hessians; cost "
                   << sc.costs[i].name << " differs from " << sc.costs[0].name << " by "
                   << (h - ref).cwiseAbs().maxCoeff();
                throw AssumptionError(os.str());
            }
        }
    }
}

}  // namespace

Trajectory simulate(const Scenario& sc) {
    check_scenario(sc);
    if (sc.params.variant == Variant::time_varying) check_identical_hessians(sc);
    if (sc.disturbance.has_value()) {
        check_disturbance_bound(*sc.disturbance, static_cast<int>(sc.costs.size()), sc.t_end);
    }

    const int n = static_cast<int>(sc.costs.size());
    const int dim = sc.costs[0].dim;
    const double h = sc.step;
    const long steps = std::lround(sc.t_end / h);
    const double denom_floor = 10.0 * h;

    std::vector<AgentState> states(n);
    for (int i = 0; i < n; ++i) {
        states[i].x = sc.x0[i];
        states[i].zeta = Vec::Zero(dim);  // zeta(0) = 0, so s(0) = grad f(x(0), 0)
        states[i].epsilon = sc.params.boundary_layer ? sc.params.eps0 : 0.0;
    }

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.sliding.reserve(steps + 1);
    traj.grad_sum_norm.reserve(steps + 1);
    traj.global_cost.reserve(steps + 1);
    traj.consensus_err.reserve(steps + 1);

    Mat xdot(dim, n), zetadot(dim, n);
    Vec epsdot(n);

    auto record = [&](double t) {
        Mat xs(dim, n), ss(dim, n);
        Vec grad_sum = Vec::Zero(dim);
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            xs.col(i) = states[i].x;
            Vec g = sc.costs[i].gradient(states[i].x, t);
            ss.col(i) = g + states[i].zeta;
            grad_sum += g;
            cost += sc.costs[i].value(states[i].x, t);
        }
        double cerr = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                cerr = std::max(cerr, (states[i].x - states[j].x).norm());
        traj.times.push_back(t);
        traj.states.push_back(std::move(xs));
        traj.sliding.push_back(std::move(ss));
        traj.grad_sum_norm.push_back(grad_sum.norm());
        traj.global_cost.push_back(cost);
        traj.consensus_err.push_back(cerr);
    };

    std::span<const AgentState> view(states);
    for (long k = 0; k <= steps; ++k) {
        const double t = k * h;
        record(t);
        if (k == steps) break;

        const Topology& topo = sc.schedule.topology_at(t);
        try {
            for (int i = 0; i < n; ++i) {
                AgentDeriv d;
                switch (sc.params.variant) {
                    case Variant::zgs_static:
                        d = zgs_rhs(i, view, sc.costs[i], topo, sc.params);
                        break;
                    case Variant::freewill:
                        d = freewill_rhs(i, view, sc.costs[i], topo, sc.params, t, denom_floor);
                        break;
                    case Variant::disturbance:
                        d = disturbance_rhs(i, view, sc.costs[i], topo, sc.params,
                                            *sc.disturbance, t);
                        break;
                    case Variant::time_varying:
                        d = timevarying_rhs(i, view, sc.costs[i], topo, sc.params, t);
                        break;
                }
                xdot.col(i) = d.xdot;
                zetadot.col(i) = d.zetadot;
                epsdot(i) = d.epsdot;
            }
        } catch (const SingularHessianError& e) {
            std::ostringstream os;
            os << e.what() << " (t = " << t << ")";
            throw SingularHessianError(os.str());
        }

        // zero-gradient-sum mechanism: pairwise consensus terms cancel, so the
        // columns of zetadot must sum to (numerical) zero at every step
        double drift_scale = std::max(1.0, zetadot.colwise().norm().sum());
        traj.zgs_drift = std::max(traj.zgs_drift,
                                  zetadot.rowwise().sum().norm() / drift_scale);
        traj.max_step_jump = std::max(traj.max_step_jump, h * xdot.colwise().norm().maxCoeff());

        // simultaneous (Jacobi) update against the frozen step-start state
        for (int i = 0; i < n; ++i) {
            states[i].x += h * xdot.col(i);
            states[i].zeta += h * zetadot.col(i);
            states[i].epsilon = std::max(states[i].epsilon + h * epsdot(i), 0.0);
            if (!states[i].x.allFinite() || !states[i].zeta.allFinite()) {
                std::ostringstream os;
                os << "non-finite state of agent " << i << " at t = " << t + h;
                throw DivergenceError(os.str());
            }
        }
    }
    return traj;
}

std::vector<double> reference_error_series(const Trajectory& traj,
                                           const std::function<Vec(double)>& reference) {
    std::vector<double> out(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        Vec ref = reference(traj.times[k]);
        out[k] = (traj.states[k].colwise() - ref).colwise().norm().maxCoeff();
    }
    return out;
}

RunSummary summarize(const Scenario& sc, const Trajectory& traj,
                     const std::function<Vec(double)>& reference) {
    RunSummary s;
    s.max_step_jump = traj.max_step_jump;
    s.zgs_drift = traj.zgs_drift;

    const std::size_t m = traj.times.size();
    std::vector<double> err = reference_error_series(traj, reference);
    s.final_error = err.back();
    s.consensus_point = traj.states.back().rowwise().mean();

    // first t such that the error stays within tol through t_end
    s.settle_time = kInf;
    double run_max = 0.0;
    std::vector<double> suffix_max(m);
    for (std::size_t k = m; k-- > 0;) {
        run_max = std::max(run_max, err[k]);
        suffix_max[k] = run_max;
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (suffix_max[k] <= sc.tol.settle) {
            s.settle_time = traj.times[k];
            break;
        }
    }

    s.zgs_time = kInf;
    run_max = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        run_max = std::max(run_max, traj.grad_sum_norm[k]);
        suffix_max[k] = run_max;
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (suffix_max[k] <= sc.tol.zgs) {
            s.zgs_time = traj.times[k];
            break;
        }
    }

    s.within_Tm = s.settle_time <= sc.params.T_m;

    const double reach_end = sc.params.eta * sc.params.T_m;
    auto idx = static_cast<std::size_t>(std::lround(reach_end / sc.step));
    if (idx < m) {
        s.slide_at_eta_Tm = traj.sliding[idx].colwise().norm().maxCoeff();
        s.sup_grad_sum_after_reach = suffix_max[idx];
    }
    return s;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error("cannot open " + path + " for writing");

    const int n = traj.n_agents();
    const int dim = traj.dim();
    std::fputs("t", fp);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) std::fprintf(fp, ",x%d_%d", i + 1, k + 1);
    for (int i = 0; i < n; ++i) std::fprintf(fp, ",s%d_norm", i + 1);
    std::fputs(",grad_sum_norm,global_cost,consensus_err\n", fp);

    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        std::fprintf(fp, "%.17g", traj.times[r]);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < dim; ++k) std::fprintf(fp, ",%.17g", traj.states[r](k, i));
        for (int i = 0; i < n; ++i)
            std::fprintf(fp, ",%.17g", traj.sliding[r].col(i).norm());
        std::fprintf(fp, ",%.17g,%.17g,%.17g\n", traj.grad_sum_norm[r], traj.global_cost[r],
                     traj.consensus_err[r]);
    }
    std::fclose(fp);
}

std::string summary_to_text(const RunSummary& s) {
    std::ostringstream os;
    os.precision(12);
    os << "settle_time: " << s.settle_time << "\n"
       << "zgs_time: " << s.zgs_time << "\n"
       << "within_Tm: " << (s.within_Tm ? "true" : "false") << "\n"
       << "final_error: " << s.final_error << "\n"
       << "slide_at_eta_Tm: " << s.slide_at_eta_Tm << "\n"
       << "sup_grad_sum_after_reach: " << s.sup_grad_sum_after_reach << "\n"
       << "max_step_jump: " << s.max_step_jump << "\n"
       << "zgs_drift: " << s.zgs_drift << "\n"
       << "consensus_point:";
    for (Eigen::Index k = 0; k < s.consensus_point.size(); ++k)
        os << " " << s.consensus_point(k);
    os << "\n";
    return os.str();
}

std::string summary_to_json(const RunSummary& s) {
    nlohmann::json j;
    auto finite_or_null = [](double v) {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    };
    j["settle_time"] = finite_or_null(s.settle_time);
    j["zgs_time"] = finite_or_null(s.zgs_time);
    j["within_Tm"] = s.within_Tm;
    j["final_error"] = s.final_error;
    j["slide_at_eta_Tm"] = s.slide_at_eta_Tm;
    j["sup_grad_sum_after_reach"] = s.sup_grad_sum_after_reach;
    j["max_step_jump"] = s.max_step_jump;
    j["zgs_drift"] = s.zgs_drift;
    j["consensus_point"] = std::vector<double>(
        s.consensus_point.data(), s.consensus_point.data() + s.consensus_point.size());
    return j.dump(2) + "\n";
}

}  // namespace zgs
