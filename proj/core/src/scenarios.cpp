#include "zgsopt/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "zgsopt/oracle.hpp"

namespace zgs {

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

std::vector<Vec> suite_A_initial_states() {
    // x1-coordinates (-2,-1,1,2,3,4), x2-coordinates (-3,-2,-1,1,2,3)
    return {v2(-2, -3), v2(-1, -2), v2(1, -1), v2(2, 1), v2(3, 2), v2(4, 3)};
}

AlgorithmParams suite_A_params() {
    AlgorithmParams p;
    p.eta = 0.4;
    p.p = 0.3;
    p.c = 3.0;
    p.T_m = 2.0;
    p.variant = Variant::zgs_static;
    return p;
}

TargetTrajectory encirclement_target() {
    TargetTrajectory t;
    t.position = [](double s) { return v2(2.0 * std::sin(s) + 0.5 * s, s); };
    t.velocity = [](double s) { return v2(2.0 * std::cos(s) + 0.5, 1.0); };
    return t;
}

}  // namespace

Scenario scenario_numerical_A() {
    Scenario sc;
    sc.name = "numerical_A";
    sc.description = "6 agents, benchmark suite A, unit ring (stand-in topology), "
                     "p=0.3 eta=0.4 c=3 T_m=2, step 1e-3";
    sc.costs = benchmark_suite_A();
    sc.schedule = SwitchingSchedule::single(ring_topology(6));
    sc.params = suite_A_params();
    sc.x0 = suite_A_initial_states();
    sc.t_end = 2.5;
    sc.step = 1e-3;
    return sc;
}

Scenario scenario_numerical_A_switching() {
    Scenario sc = scenario_numerical_A();
    sc.name = "numerical_A_switching";
    sc.description = "suite A over a schedule alternating unit ring and star every 0.5 s";
    std::vector<SwitchingSchedule::Segment> segs;
    for (int k = 0; 0.5 * k < sc.t_end; ++k) {
        segs.push_back({0.5 * k, k % 2 == 0 ? ring_topology(6) : star_topology(6)});
    }
    sc.schedule = SwitchingSchedule::from_segments(std::move(segs));
    return sc;
}

Scenario scenario_numerical_A_freewill() {
    Scenario sc = scenario_numerical_A();
    sc.name = "numerical_A_freewill";
    sc.description = "suite A under the free-will arbitrary-time variant "
                     "(k=1, c=5 >= Psi_bar/lambda2^2)";
    sc.params.variant = Variant::freewill;
    sc.params.k = 1.0;
    sc.params.c = 5.0;
    return sc;
}

Scenario scenario_scale_60(std::uint64_t seed) {
    Scenario sc;
    sc.name = "scale_60";
    sc.description = "60 agents, suite-A costs tiled ten-fold, seeded Erdos-Renyi(0.1) "
                     "graph, x0 uniform on [-5,5]^2, same gains, step 2.5e-4";
    auto suite = benchmark_suite_A();
    // agents 10i+1 .. 10i+10 share cost f_{i+1}
    for (int i = 0; i < 60; ++i) sc.costs.push_back(suite[i / 10]);
    sc.schedule = SwitchingSchedule::single(random_connected_topology(60, 0.1, seed));
    sc.params = suite_A_params();
    sc.x0.resize(60);
    std::mt19937_64 rng(seed + 0x517cc1b727220a95ULL);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (auto& x : sc.x0) {
        x = v2(unif(rng), unif(rng));
    }
    sc.t_end = 2.5;
    // finer step than the 6-agent case: the Euler chattering floor grows with
    // the graph degree, and ER(60, 0.1) averages ~6 neighbors per node
    sc.step = 2.5e-4;
    sc.tol.settle = 2e-2;
    sc.seed = seed;
    return sc;
}

Scenario scenario_encirclement(bool boundary_layer) {
    Scenario sc;
    sc.name = "encirclement";
    sc.description = "4 robots encircling a moving target: biased tracking costs on a "
                     "unit ring, eta=0.5 p=0.3 T_m=2 c=3 mu=44";
    const int n_robots = 4;
    TargetTrajectory target = encirclement_target();
    std::vector<Vec> biases = {v2(1, 1), v2(-1, -1), v2(0.5, 0.5), v2(-0.3, -0.3)};
    for (const Vec& b : biases) sc.costs.push_back(quadratic_tracking(target, b));
    sc.schedule = SwitchingSchedule::single(ring_topology(n_robots));

    sc.params.variant = Variant::time_varying;
    sc.params.eta = 0.5;
    sc.params.p = 0.3;
    sc.params.T_m = 2.0;
    sc.params.c = 3.0;
    sc.params.mu = 44.0;
    sc.params.boundary_layer = boundary_layer;
    sc.params.eps0 = 1.0;

    // x_i = p_i - h_i with formation offsets h_i = 2(cos(2 pi i / N), sin(2 pi i / N))
    std::vector<Vec> p0 = {v2(0, 0), v2(0, -1), v2(-1, 0), v2(0, 1)};
    for (int i = 1; i <= n_robots; ++i) {
        double ang = 2.0 * std::numbers::pi * i / n_robots;
        sc.x0.push_back(p0[i - 1] - 2.0 * v2(std::cos(ang), std::sin(ang)));
    }

    sc.t_end = 6.0;
    sc.step = 1e-3;
    sc.tol.settle = 5e-2;  // time-varying default band
    sc.reference = tracking_reference(biases, target);
    return sc;
}

Scenario scenario_disturbance() {
    Scenario sc = scenario_numerical_A();
    sc.name = "disturbance";
    sc.params.variant = Variant::disturbance;

    Disturbance dist;
    dist.d = [](int agent, double t) -> Vec {
        // agents are 1-based in the disturbance phases
        return 0.4 * v2(std::sin(3.0 * t + (agent + 1)), std::cos(2.0 * t + (agent + 1)));
    };
    dist.bound_D = 0.8;
    sc.disturbance = dist;

    // k = 1.05 * H * D with H the sampled Hessian 1-norm bound over the box
    std::vector<ConvexityConstants> per_agent;
    for (const auto& f : sc.costs) per_agent.push_back(estimate_constants(f, sc.constants_box));
    ConvexityConstants agg = aggregate_constants(per_agent);
    sc.params.k = 1.05 * agg.hess_norm1 * dist.bound_D;
    sc.tol.settle = 2e-2;
    sc.description = "suite A plus sinusoidal disturbances (D=0.8), sgn compensation k=" +
                     std::to_string(sc.params.k);
    return sc;
}

std::vector<std::string> builtin_scenario_names() {
    return {"numerical_A", "numerical_A_switching", "numerical_A_freewill",
            "scale_60",    "encirclement",          "disturbance"};
}

Scenario make_scenario(const std::string& name) {
    if (name == "numerical_A") return scenario_numerical_A();
    if (name == "numerical_A_switching") return scenario_numerical_A_switching();
    if (name == "numerical_A_freewill") return scenario_numerical_A_freewill();
    if (name == "scale_60") return scenario_scale_60();
    if (name == "encirclement") return scenario_encirclement(false);
    if (name == "disturbance") return scenario_disturbance();
    throw ValidationError("unknown scenario '" + name + "'; try: numerical_A, "
                          "numerical_A_switching, numerical_A_freewill, scale_60, "
                          "encirclement, disturbance");
}

}  // namespace zgs
