#pragma once

#include "trsco/conic.hpp"
#include "trsco/convexify.hpp"
#include "trsco/scenario.hpp"

namespace trsco {

struct TrustRegionWeights {
  double w_delta = 1.0;
  int order = 2;  // p; only the quadratic penalty is supported
  bool horizontal = true;  // trust-region cone over (x, y) only
};

/// Convex subproblem around `refs`:
///   min sum s_smooth + sum s_len + w_delta * delta^2
///   s.t. active linear rows,
///        ||x(t+1) - 2x(t) + x(t-1)|| <= s_smooth(t), ||x(t+1) - x(t)|| <= s_len(t),
///        ||x(t) - x_ref(t)|| <= delta (horizontal components only when weights.horizontal), 0 <= delta <= delta_cap,
///        ||(x, y) - preset|| <= d_dev.
/// An infinite delta_cap omits the trust-region cones entirely.
ConicProgram assemble_subproblem(const ActiveConstraintSet& active, const Trajectories& refs,
                                 double delta_cap, const TrustRegionWeights& weights,
                                 const Scenario& scenario);

/// Warm start for the subproblem: positions at the reference, tight epigraphs, delta = 0.
WarmStart reference_warm_start(const Trajectories& refs, const VariableLayout& layout);

/// Extracts the waypoint positions from a primal vector with the subproblem layout.
Trajectories positions_from(const Eigen::VectorXd& v, const VariableLayout& layout);

}  // namespace trsco
