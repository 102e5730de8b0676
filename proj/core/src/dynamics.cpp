#include "zgsopt/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

namespace zgs {

Vec sig_pow(const Vec& z, double alpha) {
    Vec out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        double a = std::abs(z(k));
        out(k) = a == 0.0 ? 0.0 : std::pow(a, alpha) * (z(k) > 0.0 ? 1.0 : -1.0);
    }
    return out;
}

Vec sign_vec(const Vec& z) {
    Vec out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        out(k) = z(k) > 0.0 ? 1.0 : (z(k) < 0.0 ? -1.0 : 0.0);
    }
    return out;
}

Vec norm_sgn(const Vec& z) {
    double n = z.norm();
    if (n == 0.0) return Vec::Zero(z.size());
    return z / n;
}

Vec norm_sig_pow(const Vec& z, double alpha) {
    double n = z.norm();
    if (n == 0.0) return Vec::Zero(z.size());
    return std::pow(n, alpha) * (z / n);
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::zgs_static: return "zgs_static";
        case Variant::freewill: return "freewill";
        case Variant::disturbance: return "disturbance";
        case Variant::time_varying: return "time_varying";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& s) {
    if (s == "zgs_static") return Variant::zgs_static;
    if (s == "freewill") return Variant::freewill;
    if (s == "disturbance") return Variant::disturbance;
    if (s == "time_varying") return Variant::time_varying;
    throw ValidationError("unknown variant '" + s + "'");
}

namespace {

double clamped_exp(double arg, double clamp) { return std::exp(std::min(arg, clamp)); }

// dead-zoned variants of the signum calculus, used only inside the update laws
Vec sig_pow_dz(const Vec& z, double alpha, double dz) {
    Vec out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        double a = std::abs(z(k));
        out(k) = a <= dz ? 0.0 : std::pow(a, alpha) * (z(k) > 0.0 ? 1.0 : -1.0);
    }
    return out;
}

Vec sgn_dz(const Vec& z, double dz) {
    Vec out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        out(k) = std::abs(z(k)) <= dz ? 0.0 : (z(k) > 0.0 ? 1.0 : -1.0);
    }
    return out;
}

Vec hessian_solve(const CostFunction& f, const Vec& x, double t, const Vec& rhs) {
    Mat hess = f.hessian(x, t);
    Eigen::LLT<Mat> llt(hess);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hessian of " << f.name << " not positive definite at x = ["
           << x.transpose() << "]";
        throw SingularHessianError(os.str());
    }
    return llt.solve(rhs);
}

double reach_coefficient(const AlgorithmParams& prm) {
    return 1.0 / (2.0 * prm.p * prm.eta * prm.T_m);
}

double consensus_coefficient(const AlgorithmParams& prm) {
    return 2.0 * prm.c / (prm.p * (1.0 - prm.eta) * prm.T_m);
}

// reach term (1/(2 p eta T_m)) exp(||s||^{2p}) sig^{1-2p}(s)
Vec reach_term(const Vec& s, const AlgorithmParams& prm) {
    double ns = s.norm();
    return reach_coefficient(prm) * clamped_exp(std::pow(ns, 2.0 * prm.p), prm.exp_clamp) *
           sig_pow_dz(s, 1.0 - 2.0 * prm.p, prm.deadzone);
}

// componentwise consensus sum: sum_j exp((a_ij ||d||^2)^p) a_ij^{1-p} sig^{1-2p}(d)
Vec static_consensus(int i, std::span<const AgentState> states, const Topology& topo,
                     const AlgorithmParams& prm) {
    const Vec& xi = states[i].x;
    Vec u = Vec::Zero(xi.size());
    for (const auto& [j, a] : topo.neighbors(i)) {
        Vec d = xi - states[j].x;
        double gain = clamped_exp(std::pow(a * d.squaredNorm(), prm.p), prm.exp_clamp) *
                      std::pow(a, 1.0 - prm.p);
        u += gain * sig_pow_dz(d, 1.0 - 2.0 * prm.p, prm.deadzone);
    }
    return consensus_coefficient(prm) * u;
}

}  // namespace

AgentDeriv zgs_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                   const Topology& topo, const AlgorithmParams& prm) {
    const AgentState& st = states[i];
    Vec s = f_i.gradient(st.x, 0.0) + st.zeta;
    Vec u = static_consensus(i, states, topo, prm);
    AgentDeriv d;
    d.xdot = -hessian_solve(f_i, st.x, 0.0, reach_term(s, prm) + u);
    d.zetadot = std::move(u);
    return d;
}

AgentDeriv freewill_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                        const Topology& topo, const AlgorithmParams& prm, double t,
                        double denom_floor) {
    const AgentState& st = states[i];
    const Eigen::Index n = st.x.size();

    // chi_m = (I - exp(-diag(sum_j a_mj (x_m - x_j)))) 1, componentwise 1 - e^{-v_k}
    auto chi = [&](int m) {
        Vec v = Vec::Zero(n);
        for (const auto& [l, a] : topo.neighbors(m)) v += a * (states[m].x - states[l].x);
        Vec out(n);
        for (Eigen::Index k = 0; k < n; ++k) out(k) = 1.0 - clamped_exp(-v(k), prm.exp_clamp);
        return out;
    };

    // Gains are bounded at k/denom_floor, c/denom_floor as each deadline is
    // approached. Once a denominator reaches the floor the phase has delivered
    // and its term switches off; holding the floored gain indefinitely would
    // amplify the residual every step (multiplier 1 - c/(10) * H^-1 lambda(L)^2
    // at the default floor, unstable for moderate gains at any step size).
    double reach_den = prm.eta * prm.T_m - t;
    double cons_den = (1.0 - prm.eta) * prm.T_m - t;
    double reach_gain = reach_den > denom_floor ? prm.k / reach_den : 0.0;
    double cons_gain = cons_den > denom_floor ? prm.c / cons_den : 0.0;

    Vec s = f_i.gradient(st.x, 0.0) + st.zeta;
    Vec reach(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        reach(k) = reach_gain * (1.0 - clamped_exp(-s(k), prm.exp_clamp));
    }

    Vec cons = Vec::Zero(n);
    if (cons_gain > 0.0) {
        Vec chi_i = chi(i);
        for (const auto& [j, a] : topo.neighbors(i)) cons += a * (chi_i - chi(j));
        cons *= cons_gain;
    }

    AgentDeriv d;
    d.xdot = -hessian_solve(f_i, st.x, 0.0, reach + cons);
    d.zetadot = std::move(cons);
    return d;
}

AgentDeriv disturbance_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                           const Topology& topo, const AlgorithmParams& prm,
                           const Disturbance& dist, double t) {
    const AgentState& st = states[i];
    Vec s = f_i.gradient(st.x, 0.0) + st.zeta;
    Vec u = static_consensus(i, states, topo, prm);
    Vec ctrl = reach_term(s, prm) + prm.k * sgn_dz(s, prm.deadzone) + u;
    AgentDeriv d;
    // external disturbance enters after the control terms, outside the Hessian inverse
    d.xdot = -hessian_solve(f_i, st.x, 0.0, ctrl) + dist.d(i, t);
    d.zetadot = std::move(u);
    return d;
}

AgentDeriv timevarying_rhs(int i, std::span<const AgentState> states, const CostFunction& f_i,
                           const Topology& topo, const AlgorithmParams& prm, double t) {
    const AgentState& st = states[i];
    const Eigen::Index n = st.x.size();
    Vec s = f_i.gradient(st.x, t) + st.zeta;

    Vec sig_cons = Vec::Zero(n);
    Vec mu_cons = Vec::Zero(n);
    for (const auto& [j, a] : topo.neighbors(i)) {
        Vec d = st.x - states[j].x;
        double nd = d.norm();
        double gain = clamped_exp(std::pow(a * d.squaredNorm(), prm.p), prm.exp_clamp) *
                      std::pow(a, 1.0 - prm.p);
        if (nd > prm.deadzone) {
            sig_cons += gain * std::pow(nd, 1.0 - 2.0 * prm.p) * (d / nd);
            if (prm.boundary_layer) {
                mu_cons += a * d / (nd + st.epsilon);
            } else {
                mu_cons += a * (d / nd);
            }
        }
    }
    sig_cons *= consensus_coefficient(prm);
    mu_cons *= prm.mu;

    Vec prediction = f_i.dgrad_dt(st.x, t);

    AgentDeriv d;
    d.xdot = -hessian_solve(f_i, st.x, t,
                            reach_term(s, prm) + sig_cons + mu_cons + prediction);
    d.zetadot = sig_cons + mu_cons;  // prediction term is not accumulated in zeta
    if (prm.boundary_layer) {
        double eps = st.epsilon;
        double mag = std::abs(eps);
        if (mag > prm.deadzone) {
            d.epsdot = -reach_coefficient(prm) *
                       clamped_exp(std::pow(mag, 2.0 * prm.p), prm.exp_clamp) *
                       std::pow(mag, 1.0 - 2.0 * prm.p) * (eps > 0.0 ? 1.0 : -1.0);
        }
    }
    return d;
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os << "parameter validation\n";
    for (const auto& c : checks) {
        os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name
           << "  (required " << c.required << ", actual " << c.actual << ")\n";
    }
    return os.str();
}

void check_param_ranges(const AlgorithmParams& prm) {
    std::ostringstream os;
    if (!(prm.eta > 0.0 && prm.eta < 1.0)) {
        os << "eta = " << prm.eta << " outside required range (0, 1)";
        throw ParameterError(os.str());
    }
    if (!(prm.T_m > 0.0)) {
        os << "T_m = " << prm.T_m << " must be positive";
        throw ParameterError(os.str());
    }
    if (prm.variant != Variant::freewill && !(prm.p > 0.0 && prm.p < 0.5)) {
        os << "p = " << prm.p << " outside required range (0, 1/2)";
        throw ParameterError(os.str());
    }
    if (prm.variant == Variant::freewill && !(prm.k >= 1.0)) {
        os << "free-will gain k = " << prm.k << " must be >= 1";
        throw ParameterError(os.str());
    }
    if (!(prm.c > 0.0)) {
        os << "c = " << prm.c << " must be positive";
        throw ParameterError(os.str());
    }
    if (prm.mu < 0.0 || prm.k < 0.0) {
        os << "gains mu and k must be nonnegative (mu = " << prm.mu << ", k = " << prm.k
           << ")";
        throw ParameterError(os.str());
    }
    if (prm.deadzone < 0.0 || !(prm.exp_clamp > 0.0)) {
        os << "guards: deadzone must be >= 0 and exp_clamp > 0";
        throw ParameterError(os.str());
    }
    if (prm.boundary_layer && !(prm.eps0 > 0.0)) {
        os << "boundary layer requires eps0 > 0, got " << prm.eps0;
        throw ParameterError(os.str());
    }
}

ValidationReport validate_params(const AlgorithmParams& prm, const ConvexityConstants& agg,
                                 double lambda2_min, int n_agents, double a_min,
                                 std::optional<double> disturbance_D) {
    check_param_ranges(prm);

    // sampling under-estimates suprema; the sampled Psi-bar enters with a 1.05 factor
    const double psi_bar = 1.05 * agg.Psi;
    ValidationReport rep;

    if (prm.variant == Variant::freewill) {
        double req = psi_bar / (lambda2_min * lambda2_min);
        rep.checks.push_back({"c >= 1.05*Psi_bar/lambda2^2", req, prm.c, prm.c >= req});
    } else {
        double req = psi_bar / (4.0 * lambda2_min);
        rep.checks.push_back({"c >= 1.05*Psi_bar/(4*lambda2_min)", req, prm.c, prm.c >= req});
    }

    if (prm.variant == Variant::time_varying) {
        double req = 2.0 * n_agents * agg.omega * psi_bar / (a_min * agg.psi);
        rep.checks.push_back(
            {"mu >= 2*N*omega*1.05*Psi_bar/(a_min*psi_min)", req, prm.mu, prm.mu >= req});
    }

    if (prm.variant == Variant::disturbance && disturbance_D.has_value()) {
        double req = agg.hess_norm1 * *disturbance_D;
        rep.checks.push_back({"k >= H*D", req, prm.k, prm.k >= req});
    }
    return rep;
}

void check_disturbance_bound(const Disturbance& dist, int n_agents, double t_end,
                             int samples) {
    for (int s = 0; s <= samples; ++s) {
        double t = t_end * s / samples;
        for (int i = 0; i < n_agents; ++i) {
            double l1 = dist.d(i, t).cwiseAbs().sum();
            if (l1 > dist.bound_D + 1e-12) {
                std::ostringstream os;
                os << "disturbance: ||d_" << i << "(" << t << ")||_1 = " << l1
                   << " exceeds declared bound " << dist.bound_D;
                throw ValidationError(os.str());
            }
        }
    }
}

}  // namespace zgs
