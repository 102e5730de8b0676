#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zgsopt/sim.hpp"

namespace zgs {

// Built-in scenarios. Topologies standing in for the paper's pictorial
// figures are declared here and recorded in each scenario's description.

/// 6 agents, benchmark suite A on a unit-weight ring, p=0.3, eta=0.4, c=3,
/// T_m=2, step 1e-3, t_end 2.5.
Scenario scenario_numerical_A();

/// Same setup over a schedule alternating ring and star every 0.5 s.
Scenario scenario_numerical_A_switching();

/// Suite A under the free-will arbitrary-time variant (k=1, c=5).
Scenario scenario_numerical_A_freewill();

/// 60 agents: suite-A costs tiled ten-fold, seeded Erdos-Renyi(0.1) graph,
/// initial values uniform on [-5,5]^2, same gains, step 2.5e-4.
Scenario scenario_scale_60(std::uint64_t seed = 1);

/// 4 robots encircling a moving target: biased squared-distance tracking
/// costs on a unit ring, eta=0.5, p=0.3, T_m=2, c=3, mu=44, t_end 6.
Scenario scenario_encirclement(bool boundary_layer);

/// Suite A plus sinusoidal disturbances d_i(t) = 0.4 (sin(3t+i), cos(2t+i))
/// with sgn compensation k = 1.05 * H * D from the sampled Hessian bound.
Scenario scenario_disturbance();

std::vector<std::string> builtin_scenario_names();

/// Look up a built-in scenario by name; throws ValidationError for unknown names.
Scenario make_scenario(const std::string& name);

}  // namespace zgs
