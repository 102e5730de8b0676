#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zgsopt/graph.hpp"

namespace zgs {

/// Local objective with exact derivatives. Evaluation is pure; instances are
/// safe to share and evaluate concurrently. Static costs ignore t and have
/// dgrad_dt == 0.
struct CostFunction {
    int dim = 0;
    bool time_varying = false;
    std::string name;

    std::function<double(const Vec&, double)> value;
    std::function<Vec(const Vec&, double)> gradient;
    std::function<Mat(const Vec&, double)> hessian;
    std::function<Vec(const Vec&, double)> dgrad_dt;
};

/// Axis-aligned box used for derivative checks and constant estimation.
struct DomainBox {
    Vec lo, hi;

    static DomainBox centered(int dim, double half_width);
};

/// Two-sided Hessian bounds and time-variation bounds, as sampled estimates.
/// psi: strong convexity (min eigenvalue), Psi: gradient Lipschitz constant
/// (max eigenvalue), omega: sup-norm bound on d/dt grad f, hess_norm1: bound
/// on the induced 1-norm of the Hessian.
struct ConvexityConstants {
    double psi = 0.0;
    double Psi = 0.0;
    double omega = 0.0;
    double hess_norm1 = 0.0;
};

/// The six planar costs of the paper-scale benchmark (quadratics plus
/// sin/cos/log/exp/rational terms), with hand-derived gradients and Hessians.
std::vector<CostFunction> benchmark_suite_A();

/// A target trajectory with its time derivative.
struct TargetTrajectory {
    std::function<Vec(double)> position;
    std::function<Vec(double)> velocity;
};

/// Squared-distance tracking cost f(x,t) = ||x - (p*(t) + bias)||^2.
/// Hessian is 2I for every agent, so a set of these satisfies the identical-
/// Hessian assumption of the time-varying algorithm.
CostFunction quadratic_tracking(const TargetTrajectory& target, const Vec& bias);

/// Static quadratic 0.5 x^T Q x + b^T x + c with SPD Q.
CostFunction quadratic_cost(const Mat& Q, const Vec& b, double c = 0.0);

struct DerivativeReport {
    double max_gradient_rel_err = 0.0;
    double max_hessian_rel_err = 0.0;
    double max_dgrad_dt_rel_err = 0.0;
    Vec worst_gradient_point;
    Vec worst_hessian_point;
    int samples = 0;
};

/// Central finite-difference validation of gradient (vs value), Hessian
/// (vs gradient) and, for time-varying costs, dgrad_dt (vs gradient in t) at
/// uniformly sampled points of the box. Throws DerivativeError naming the
/// point and component on mismatch beyond tolerance.
DerivativeReport check_derivatives(const CostFunction& f, int samples,
                                   const DomainBox& box, std::uint64_t seed);

struct ConstantsOptions {
    int grid_per_axis = 41;
    double t_lo = 0.0;
    double t_hi = 10.0;
    int t_grid = 101;
};

/// Grid-sampled estimates of psi, Psi, omega, and the Hessian 1-norm bound
/// over the box. Throws ConvexityError if the Hessian loses positive
/// definiteness anywhere on the grid.
ConvexityConstants estimate_constants(const CostFunction& f, const DomainBox& box,
                                      const ConstantsOptions& opts = {});

/// Network-level aggregate: min psi, max Psi, max omega, max hess_norm1.
ConvexityConstants aggregate_constants(std::span<const ConvexityConstants> per_agent);

}  // namespace zgs
