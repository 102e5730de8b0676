#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zgsopt/costs.hpp"
#include "zgsopt/graph.hpp"

namespace zgs {

// Signum calculus. All three operators map 0 to 0 exactly.

/// Componentwise signed power |z_k|^alpha * sgn(z_k).
Vec sig_pow(const Vec& z, double alpha);

/// Componentwise sign.
Vec sign_vec(const Vec& z);

/// Norm-normalized signum z / ||z||.
Vec norm_sgn(const Vec& z);

/// Norm-normalized signed power ||z||^alpha * z / ||z||.
Vec norm_sig_pow(const Vec& z, double alpha);

enum class Variant { zgs_static, freewill, disturbance, time_varying };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct AlgorithmParams {
    double eta = 0.4;     // reach/slide time split, in (0,1)
    double p = 0.3;       // power-feedback exponent, in (0,1/2)
    double T_m = 2.0;     // predefined settling bound, > 0
    double c = 3.0;       // consensus gain
    double mu = 0.0;      // non-smooth consensus gain (time-varying variant)
    double k = 0.0;       // disturbance sgn gain; free-will reach gain (>= 1)
    Variant variant = Variant::zgs_static;

    // integration guards
    double exp_clamp = 50.0;   // cap on every exp() argument
    double deadzone = 1e-9;    // radius below which non-Lipschitz terms output 0
    bool boundary_layer = false;
    double eps0 = 1.0;         // initial boundary-layer width
};

/// Per-agent state: decision vector x, consensus accumulator zeta
/// (so the sliding variable is s = grad f(x,t) + zeta), and the
/// boundary-layer width.
struct AgentState {
    Vec x;
    Vec zeta;
    double epsilon = 0.0;
};

/// Exogenous per-agent disturbance with declared 1-norm bound.
struct Disturbance {
    std::function<Vec(int agent, double t)> d;
    double bound_D = 0.0;
};

struct AgentDeriv {
    Vec xdot;
    Vec zetadot;
    double epsdot = 0.0;
};

// Right-hand sides of the four algorithm variants. Each evaluates the
// derivative of agent i against the frozen current states of all agents.
// Throws SingularHessianError if the local Hessian solve fails.

AgentDeriv zgs_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                   const Topology& topo, const AlgorithmParams& prm);

/// Free-will arbitrary-time dynamics; the gains c/((1-eta)T_m - t) and
/// k/(eta T_m - t) grow to at most k/denom_floor (10x the integration step in
/// the simulator), and each term switches off once its denominator reaches
/// the floor: the phase has delivered by its deadline, and integrating a
/// floored 1/denom_floor gain forever is unstable under forward Euler.
AgentDeriv freewill_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                        const Topology& topo, const AlgorithmParams& prm, double t,
                        double denom_floor);

AgentDeriv disturbance_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                           const Topology& topo, const AlgorithmParams& prm,
                           const Disturbance& dist, double t);

AgentDeriv timevarying_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                           const Topology& topo, const AlgorithmParams& prm, double t);

struct BoundCheck {
    std::string name;
    double required = 0.0;
    double actual = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<BoundCheck> checks;
    bool all_pass() const;
    std::string to_text() const;
};

/// Hard range checks on eta, p, T_m (and k for the free-will variant);
/// throws ParameterError with the violated range.
void check_param_ranges(const AlgorithmParams& prm);

/// Check the theorem gain bounds against sampled constants. Range violations
/// of eta, p, T_m (and k for the free-will variant) throw ParameterError;
/// gain bounds are reported pass/fail. The sampled Psi-bar enters with a
/// 1.05 safety factor. disturbance_D, when given, adds the k >= H*D check.
ValidationReport validate_params(const AlgorithmParams& prm, const ConvexityConstants& agg,
                                 double lambda2_min, int n_agents, double a_min,
                                 std::optional<double> disturbance_D = std::nullopt);

/// Sample ||d_i(t)||_1 over [0, t_end] and throw ValidationError if the
/// declared bound_D is exceeded.
void check_disturbance_bound(const Disturbance& dist, int n_agents, double t_end,
                             int samples = 200);

}  // namespace zgs
