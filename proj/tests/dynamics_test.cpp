#include <doctest.h>

#include <cmath>
#include <random>

#include "zgsopt/dynamics.hpp"
#include "zgsopt/oracle.hpp"

using namespace zgs;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec v1(double a) {
    Vec v(1);
    v << a;
    return v;
}

Vec random_vec(std::mt19937_64& rng, int n, double scale = 3.0) {
    std::uniform_real_distribution<double> unif(-scale, scale);
    Vec v(n);
    for (int k = 0; k < n; ++k) v(k) = unif(rng);
    return v;
}

AlgorithmParams params_A() {
    AlgorithmParams p;
    p.eta = 0.4;
    p.p = 0.3;
    p.T_m = 2.0;
    p.c = 3.0;
    return p;
}

std::vector<AgentState> make_states(const std::vector<Vec>& xs) {
    std::vector<AgentState> states;
    for (const Vec& x : xs) states.push_back({x, Vec::Zero(x.size()), 0.0});
    return states;
}

}  // namespace

TEST_CASE("sig_pow basics") {
    Vec z(3);
    z << -1.0, 0.0, 1.0;
    Vec out = sig_pow(z, 0.4);
    CHECK(out(0) == doctest::Approx(-1.0));
    CHECK(out(1) == 0.0);
    CHECK(out(2) == doctest::Approx(1.0));

    // 32^0.4 = 2^(5*0.4) = 4
    CHECK(sig_pow(v1(-32.0), 0.4)(0) == doctest::Approx(-4.0).epsilon(1e-12));

    // zero maps to zero for any exponent, including negative ones
    CHECK(sig_pow(v1(0.0), -0.5)(0) == 0.0);
    CHECK(sig_pow(Vec::Zero(4), 0.4).norm() == 0.0);
}

TEST_CASE("norm-normalized signum operators") {
    Vec z = v2(3.0, 4.0);
    Vec s = norm_sgn(z);
    CHECK(s(0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s(1) == doctest::Approx(0.8).epsilon(1e-15));

    // 5^0.4 = 1.9036539387158786, frozen from independent scalar evaluation
    Vec g = norm_sig_pow(z, 0.4);
    CHECK(g(0) == doctest::Approx(1.1421923632295271).epsilon(1e-12));
    CHECK(g(1) == doctest::Approx(1.5229231509727029).epsilon(1e-12));

    CHECK(norm_sgn(Vec::Zero(3)).norm() == 0.0);
    CHECK(norm_sig_pow(Vec::Zero(3), 0.4).norm() == 0.0);
    CHECK(sign_vec(v2(-2.0, 0.0))(0) == -1.0);
    CHECK(sign_vec(v2(-2.0, 0.0))(1) == 0.0);
}

TEST_CASE("oddness of the signum calculus") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Vec z = random_vec(rng, 4);
        CHECK((sig_pow(-z, 0.37) + sig_pow(z, 0.37)).norm() == 0.0);
        CHECK((norm_sgn(-z) + norm_sgn(z)).norm() == 0.0);
        CHECK((norm_sig_pow(-z, 0.8) + norm_sig_pow(z, 0.8)).norm() == 0.0);
    }
}

TEST_CASE("power-sum inequality in both exponent regimes") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> zdist(0.0, 10.0);
    std::uniform_real_distribution<double> plow(0.01, 1.0);
    std::uniform_real_distribution<double> phigh(1.0, 4.0);
    for (int trial = 0; trial < 2000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        double sum = 0.0, sum_p_low = 0.0, sum_p_high = 0.0;
        double pl = plow(rng), ph = phigh(rng);
        for (int k = 0; k < n; ++k) {
            double z = zdist(rng);
            sum += z;
            sum_p_low += std::pow(z, pl);
            sum_p_high += std::pow(z, ph);
        }
        CHECK(sum_p_low >= std::pow(sum, pl) - 1e-9);
        CHECK(sum_p_high >= std::pow(n, 1.0 - ph) * std::pow(sum, ph) - 1e-9);
    }
}

TEST_CASE("zgs_rhs is zero at consensus with s = 0") {
    auto suite = benchmark_suite_A();
    Topology ring = ring_topology(6);
    AlgorithmParams prm = params_A();

    Vec x = v2(0.7, -0.9);
    std::vector<AgentState> states;
    for (int i = 0; i < 6; ++i) {
        // zeta = -grad f_i(x) puts the agent exactly on s_i = 0
        states.push_back({x, -suite[i].gradient(x, 0.0), 0.0});
    }
    for (int i = 0; i < 6; ++i) {
        AgentDeriv d = zgs_rhs(i, states, suite[i], ring, prm);
        CHECK(d.xdot.norm() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(d.zetadot.norm() == 0.0);
    }
}

TEST_CASE("single agent reach term matches the scalar closed form") {
    // quadratic f(x) = x^2, x = 1, zeta = 0, p = 0.3, eta = 0.4, T_m = 2:
    // xdot = -(1/2) (1/(2*0.3*0.8)) e^(2^0.6) 2^0.4 = -6.2576044318563355
    Mat q(1, 1);
    q << 2.0;
    CostFunction f = quadratic_cost(q, Vec::Zero(1));
    Topology single = Topology::from_edges(1, {});
    AlgorithmParams prm = params_A();

    std::vector<AgentState> states = make_states({v1(1.0)});
    AgentDeriv d = zgs_rhs(0, states, f, single, prm);
    CHECK(d.xdot(0) == doctest::Approx(-6.2576044318563355).epsilon(1e-12));
    CHECK(d.zetadot(0) == 0.0);
}

TEST_CASE("two symmetric agents move antisymmetrically") {
    Mat q(2, 2);
    q << 2.0, 0.0, 0.0, 2.0;
    CostFunction f = quadratic_cost(q, Vec::Zero(2));
    Topology pair = Topology::from_edges(2, {{0, 1, 1.0}});
    AlgorithmParams prm = params_A();

    std::vector<AgentState> states = make_states({v2(1.5, -0.7), v2(-1.5, 0.7)});
    AgentDeriv d0 = zgs_rhs(0, states, f, pair, prm);
    AgentDeriv d1 = zgs_rhs(1, states, f, pair, prm);
    CHECK((d0.xdot + d1.xdot).norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK((d0.zetadot + d1.zetadot).norm() == 0.0);
}

TEST_CASE("zetadot sums to zero across agents for every variant") {
    auto suite = benchmark_suite_A();
    Topology ring = ring_topology(6);
    std::mt19937_64 rng(23);

    Disturbance dist;
    dist.d = [](int, double) { return Vec::Zero(2); };
    dist.bound_D = 0.0;

    TargetTrajectory target;
    target.position = [](double t) { return v2(std::sin(t), t); };
    target.velocity = [](double t) { return v2(std::cos(t), 1.0); };
    std::vector<CostFunction> tracking;
    for (int i = 0; i < 6; ++i) {
        tracking.push_back(quadratic_tracking(target, v2(0.1 * i, -0.2 * i)));
    }

    for (int trial = 0; trial < 25; ++trial) {
        std::vector<AgentState> states;
        for (int i = 0; i < 6; ++i) {
            states.push_back({random_vec(rng, 2), random_vec(rng, 2), 0.5});
        }
        double t = 0.05 * trial;

        AlgorithmParams prm = params_A();
        Vec sum = Vec::Zero(2);
        double scale = 0.0;
        for (int i = 0; i < 6; ++i) {
            AgentDeriv d = zgs_rhs(i, states, suite[i], ring, prm);
            sum += d.zetadot;
            scale += d.zetadot.norm();
        }
        CHECK(sum.norm() <= 1e-12 * std::max(1.0, scale));

        prm.variant = Variant::freewill;
        prm.k = 1.0;
        sum.setZero();
        scale = 0.0;
        for (int i = 0; i < 6; ++i) {
            AgentDeriv d = freewill_rhs(i, states, suite[i], ring, prm, t, 1e-2);
            sum += d.zetadot;
            scale += d.zetadot.norm();
        }
        CHECK(sum.norm() <= 1e-12 * std::max(1.0, scale));

        prm = params_A();
        prm.variant = Variant::disturbance;
        prm.k = 2.0;
        sum.setZero();
        scale = 0.0;
        for (int i = 0; i < 6; ++i) {
            AgentDeriv d = disturbance_rhs(i, states, suite[i], ring, prm, dist, t);
            sum += d.zetadot;
            scale += d.zetadot.norm();
        }
        CHECK(sum.norm() <= 1e-12 * std::max(1.0, scale));

        prm = params_A();
        prm.variant = Variant::time_varying;
        prm.mu = 44.0;
        sum.setZero();
        scale = 0.0;
        for (int i = 0; i < 6; ++i) {
            AgentDeriv d = timevarying_rhs(i, states, tracking[i], ring, prm, t);
            sum += d.zetadot;
            scale += d.zetadot.norm();
        }
        CHECK(sum.norm() <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("consensus term is translation invariant") {
    auto suite = benchmark_suite_A();
    Topology ring = ring_topology(6);
    AlgorithmParams prm = params_A();
    std::mt19937_64 rng(31);

    std::vector<Vec> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(random_vec(rng, 2));
    Vec shift = v2(0.83, -1.91);

    std::vector<AgentState> base = make_states(xs);
    std::vector<Vec> shifted;
    for (const Vec& x : xs) shifted.push_back(x + shift);
    std::vector<AgentState> moved = make_states(shifted);

    for (int i = 0; i < 6; ++i) {
        Vec u0 = zgs_rhs(i, base, suite[i], ring, prm).zetadot;
        Vec u1 = zgs_rhs(i, moved, suite[i], ring, prm).zetadot;
        CHECK((u0 - u1).norm() <= 1e-9 * std::max(1.0, u0.norm()));
    }
}

TEST_CASE("reach-phase decay stays within the reach window for any start") {
    // Vs = ||s||^2/2 obeys Vdot = -(1/(2^p p eta T_m)) exp(2^p Vs^p) Vs^(1-p),
    // which is the scalar oracle with alpha = 2^p and horizon eta T_m
    AlgorithmParams prm = params_A();
    double alpha = std::pow(2.0, prm.p);
    for (double s0 : {1.0, 10.0, 1000.0}) {
        double zero_time = scalar_pdt_decay(0.5 * s0 * s0, alpha, prm.p, prm.eta * prm.T_m);
        CHECK(zero_time <= prm.eta * prm.T_m);
    }
}

TEST_CASE("freewill chi formula and gain guard") {
    Mat q(1, 1);
    q << 2.0;
    CostFunction f = quadratic_cost(q, Vec::Zero(1));
    Topology pair = Topology::from_edges(2, {{0, 1, 1.0}});
    AlgorithmParams prm = params_A();
    prm.variant = Variant::freewill;
    prm.k = 1.0;
    prm.c = 1.0;

    // v = a_01 (x_0 - x_1) = ln 2 gives chi component 1 - 1/2 = 0.5;
    // chi_1 sees -ln 2, so chi_1 = 1 - 2 = -1 and the difference is 1.5
    std::vector<AgentState> states = make_states({v1(std::log(2.0)), v1(0.0)});
    double t = 0.0;
    AgentDeriv d = freewill_rhs(0, states, f, pair, prm, t, 1e-2);
    double expected_cons = (prm.c / ((1.0 - prm.eta) * prm.T_m - t)) * (0.5 - (-1.0));
    CHECK(d.zetadot(0) == doctest::Approx(expected_cons).epsilon(1e-12));

    // consensus-aligned states kill the chi terms
    std::vector<AgentState> aligned = make_states({v1(0.4), v1(0.4)});
    AgentDeriv da = freewill_rhs(0, aligned, f, pair, prm, t, 1e-2);
    CHECK(da.zetadot(0) == 0.0);

    // approaching the reach deadline the gain is bounded by k/denom_floor
    std::vector<AgentState> hot = make_states({v1(3.0), v1(3.0)});
    double floor = 1e-2;
    double near = prm.eta * prm.T_m - 1.5 * floor;
    AgentDeriv dn = freewill_rhs(0, hot, f, pair, prm, near, floor);
    double s = 6.0;  // grad f = 2x = 6, zeta = 0
    double expected = -(prm.k / (1.5 * floor)) * (1.0 - std::exp(-s)) / 2.0;
    CHECK(dn.xdot(0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(dn.xdot(0)) <= (prm.k / floor) * 1.0 / 2.0);

    // past the deadline the delivered phase switches off
    AgentDeriv dh = freewill_rhs(0, hot, f, pair, prm, prm.eta * prm.T_m + 1.0, floor);
    CHECK(dh.xdot(0) == 0.0);  // consensus part also vanishes (aligned states)
    AgentDeriv dlate = freewill_rhs(0, states, f, pair, prm,
                                    (1.0 - prm.eta) * prm.T_m + 1.0, floor);
    CHECK(dlate.zetadot(0) == 0.0);
}

TEST_CASE("disturbance variant reduces to the static law when d = 0 and k = 0") {
    auto suite = benchmark_suite_A();
    Topology ring = ring_topology(6);
    AlgorithmParams prm = params_A();
    prm.variant = Variant::disturbance;
    prm.k = 0.0;

    Disturbance none;
    none.d = [](int, double) { return Vec::Zero(2); };
    none.bound_D = 0.0;

    std::mt19937_64 rng(77);
    std::vector<AgentState> states;
    for (int i = 0; i < 6; ++i) states.push_back({random_vec(rng, 2), random_vec(rng, 2), 0.0});

    for (int i = 0; i < 6; ++i) {
        AgentDeriv dist = disturbance_rhs(i, states, suite[i], ring, prm, none, 0.3);
        AgentDeriv plain = zgs_rhs(i, states, suite[i], ring, prm);
        CHECK((dist.xdot - plain.xdot).norm() == 0.0);
        CHECK((dist.zetadot - plain.zetadot).norm() == 0.0);
    }
}

TEST_CASE("sgn compensation is silent inside the deadzone") {
    Mat q(2, 2);
    q << 2.0, 0.0, 0.0, 2.0;
    CostFunction f = quadratic_cost(q, Vec::Zero(2));
    Topology single = Topology::from_edges(1, {});
    AlgorithmParams prm = params_A();
    prm.variant = Variant::disturbance;
    prm.k = 5.0;

    Disturbance none;
    none.d = [](int, double) { return Vec::Zero(2); };
    none.bound_D = 0.0;

    // s = grad f + zeta = 0 exactly
    std::vector<AgentState> states = {{v2(1.0, -2.0), -f.gradient(v2(1.0, -2.0), 0.0), 0.0}};
    AgentDeriv d = disturbance_rhs(0, states, f, single, prm, none, 0.0);
    CHECK(d.xdot.norm() == 0.0);
}

TEST_CASE("time-varying prediction term equals the target velocity for tracking costs") {
    TargetTrajectory target;
    target.position = [](double t) { return v2(2.0 * std::sin(t) + 0.5 * t, t); };
    target.velocity = [](double t) { return v2(2.0 * std::cos(t) + 0.5, 1.0); };
    CostFunction f = quadratic_tracking(target, v2(0, 0));
    Topology single = Topology::from_edges(1, {});
    AlgorithmParams prm = params_A();
    prm.variant = Variant::time_varying;
    prm.mu = 44.0;

    double t = 1.3;
    // on s = 0 with no neighbors, xdot = -(2I)^{-1} dgrad_dt = +pdot*(t)
    Vec x = v2(0.4, -0.2);
    std::vector<AgentState> states = {{x, -f.gradient(x, t), 0.0}};
    AgentDeriv d = timevarying_rhs(0, states, f, single, prm, t);
    CHECK(d.xdot(0) == doctest::Approx(2.0 * std::cos(t) + 0.5).epsilon(1e-12));
    CHECK(d.xdot(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary-layer width reaches zero within the reach window") {
    TargetTrajectory target;
    target.position = [](double) { return v2(0, 0); };
    target.velocity = [](double) { return v2(0, 0); };
    CostFunction f = quadratic_tracking(target, v2(0, 0));
    Topology single = Topology::from_edges(1, {});

    AlgorithmParams prm;
    prm.eta = 0.5;
    prm.p = 0.3;
    prm.T_m = 2.0;
    prm.variant = Variant::time_varying;
    prm.boundary_layer = true;

    // epsilon dynamics integrated through the public rhs with the simulator's clamp
    double dt = 1e-3;
    AgentState st{v2(0, 0), v2(0, 0), 1.0};
    std::vector<AgentState> states = {st};
    double crossing = -1.0;
    for (int k = 0; k * dt <= 1.5; ++k) {
        AgentDeriv d = timevarying_rhs(0, states, f, single, prm, k * dt);
        states[0].epsilon = std::max(states[0].epsilon + dt * d.epsdot, 0.0);
        if (states[0].epsilon == 0.0) {
            crossing = (k + 1) * dt;
            break;
        }
    }
    CHECK(crossing > 0.0);
    CHECK(crossing <= prm.eta * prm.T_m);
}

TEST_CASE("parameter range checks") {
    ConvexityConstants agg{0.6, 4.3, 0.0, 4.5};
    AlgorithmParams prm = params_A();

    prm.p = 0.6;
    CHECK_THROWS_AS(validate_params(prm, agg, 1.0, 6, 1.0), ParameterError);
    prm = params_A();
    prm.eta = 1.0;
    CHECK_THROWS_AS(validate_params(prm, agg, 1.0, 6, 1.0), ParameterError);
    prm = params_A();
    prm.T_m = 0.0;
    CHECK_THROWS_AS(validate_params(prm, agg, 1.0, 6, 1.0), ParameterError);
    prm = params_A();
    prm.variant = Variant::freewill;
    prm.k = 0.5;
    CHECK_THROWS_AS(validate_params(prm, agg, 1.0, 6, 1.0), ParameterError);
}

TEST_CASE("gain bounds report") {
    ConvexityConstants agg{0.6, 4.3, 0.0, 4.5};

    // suite A on the unit ring: c = 3 >= 1.05*4.3/4
    AlgorithmParams prm = params_A();
    ValidationReport rep = validate_params(prm, agg, 1.0, 6, 1.0);
    CHECK(rep.all_pass());
    CHECK(rep.checks[0].required == doctest::Approx(1.05 * 4.3 / 4.0));

    prm.c = 0.5;
    CHECK_FALSE(validate_params(prm, agg, 1.0, 6, 1.0).all_pass());

    // encirclement constants: mu bound 2*4*5*2/(1*2) = 40 (42 with the 1.05 factor)
    ConvexityConstants tv{2.0, 2.0, 5.0, 2.0};
    AlgorithmParams tvp = params_A();
    tvp.variant = Variant::time_varying;
    tvp.mu = 44.0;
    ValidationReport tvrep = validate_params(tvp, tv, 1.0, 4, 1.0);
    CHECK(tvrep.all_pass());
    CHECK(tvrep.checks[1].required == doctest::Approx(42.0));

    // disturbance: k >= H*D, quadratic example 2.5 >= 2*1
    ConvexityConstants qc{2.0, 2.0, 0.0, 2.0};
    AlgorithmParams dp = params_A();
    dp.variant = Variant::disturbance;
    dp.k = 2.5;
    ValidationReport drep = validate_params(dp, qc, 1.0, 6, 1.0, 1.0);
    CHECK(drep.all_pass());
    CHECK(drep.checks[1].required == doctest::Approx(2.0));
    dp.k = 1.5;
    CHECK_FALSE(validate_params(dp, qc, 1.0, 6, 1.0, 1.0).all_pass());
}

TEST_CASE("disturbance bound sampling") {
    Disturbance d;
    d.d = [](int agent, double t) -> Vec {
        return 0.4 * v2(std::sin(3.0 * t + agent + 1), std::cos(2.0 * t + agent + 1));
    };
    d.bound_D = 0.8;
    CHECK_NOTHROW(check_disturbance_bound(d, 6, 2.5));
    d.bound_D = 0.5;  // too tight for the 1-norm peak
    CHECK_THROWS_AS(check_disturbance_bound(d, 6, 2.5), ValidationError);
}
