#pragma once

#include <functional>
#include <span>
#include <vector>

#include "zgsopt/costs.hpp"

namespace zgs {

/// Centralized ground-truth optimum: x* with sum_i grad f_i(x*) = 0.
struct OracleSolution {
    Vec x_star;
    double residual = 0.0;
    int iterations = 0;
};

/// Damped Newton on F(x) = sum_i f_i(x, t) down to gradient norm 1e-12
/// (cap 200 iterations). Backtracking halves the step while F increases.
OracleSolution centralized_minimize(std::span<const CostFunction> costs, const Vec& x0,
                                    double t = 0.0);

/// Scalar predefined-time decay oracle: integrates
///   Vdot = -(1/(alpha p T_m)) exp(alpha V^p) V^(1-p)
/// by Euler at step 1e-5 and returns the time at which V falls below 1e-12.
/// The decay lemma asserts this never exceeds T_m.
double scalar_pdt_decay(double V0, double alpha, double p, double T_m);

/// Closed-form optimal trajectory for biased squared-distance tracking costs:
/// t -> p*(t) + mean(biases).
std::function<Vec(double)> tracking_reference(const std::vector<Vec>& biases,
                                              const TargetTrajectory& target);

}  // namespace zgs
