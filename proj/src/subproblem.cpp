#include "trsco/subproblem.hpp"

#include <cmath>

namespace trsco {

ConicProgram assemble_subproblem(const ActiveConstraintSet& active, const Trajectories& refs,
                                 double delta_cap, const TrustRegionWeights& weights,
                                 const Scenario& scenario) {
  if (weights.order != 2) throw DomainError("assemble_subproblem: only penalty order p = 2 is supported");
  if (!(delta_cap > 0.0)) throw DomainError("assemble_subproblem: delta_cap must be > 0");
  if (!(weights.w_delta >= 0.0)) throw DomainError("assemble_subproblem: w_delta must be >= 0");
  const VariableLayout layout = scenario.layout();
  const int N = layout.n_drones;
  const int T = layout.n_waypoints;
  if (N * T == 0) throw DomainError("assemble_subproblem: no waypoints");
  if (refs.n_drones() != N || refs.n_waypoints() != T) {
    throw DomainError("assemble_subproblem: reference dimensions do not match the scenario");
  }

  ConicProgramBuilder builder(layout.n_variables());
  const int delta = layout.delta();

  for (int k = 0; k < N; ++k) {
    for (int t = 1; t + 1 < T; ++t) builder.add_linear_cost(layout.smooth_epigraph(k, t), 1.0);
    for (int t = 0; t + 1 < T; ++t) builder.add_linear_cost(layout.length_epigraph(k, t), 1.0);
  }
  if (weights.w_delta > 0.0) builder.add_quadratic_cost(delta, delta, 2.0 * weights.w_delta);

  for (const auto& row : active.retained) builder.add_inequality(row.terms, row.rhs);
  builder.add_inequality({{delta, -1.0}}, 0.0);
  const bool trust_region = std::isfinite(delta_cap);
  if (trust_region) builder.add_inequality({{delta, 1.0}}, delta_cap);

  const double d_dev = scenario.params.d_dev;
  for (int k = 0; k < N; ++k) {
    for (int t = 0; t < T; ++t) {
      if (t >= 1 && t + 1 < T) {
        std::vector<AffineExpr> u(3);
        for (int a = 0; a < 3; ++a) {
          u[a].terms = {{layout.position(k, t + 1, a), 1.0},
                        {layout.position(k, t, a), -2.0},
                        {layout.position(k, t - 1, a), 1.0}};
        }
        builder.add_soc({0.0, {{layout.smooth_epigraph(k, t), 1.0}}}, u);
      }
      if (t + 1 < T) {
        std::vector<AffineExpr> u(3);
        for (int a = 0; a < 3; ++a) {
          u[a].terms = {{layout.position(k, t + 1, a), 1.0}, {layout.position(k, t, a), -1.0}};
        }
        builder.add_soc({0.0, {{layout.length_epigraph(k, t), 1.0}}}, u);
      }
      if (trust_region) {
        const int dims = weights.horizontal ? 2 : 3;
        std::vector<AffineExpr> u(dims);
        for (int a = 0; a < dims; ++a) u[a] = {-refs.at(k, t)[a], {{layout.position(k, t, a), 1.0}}};
        builder.add_soc({0.0, {{delta, 1.0}}}, u);
      }
      const Point2& w = scenario.preset.at(k, t);
      std::vector<AffineExpr> dev(2);
      for (int a = 0; a < 2; ++a) dev[a] = {-w[a], {{layout.position(k, t, a), 1.0}}};
      builder.add_soc({d_dev, {}}, dev);
    }
  }
  return builder.build(layout);
}

WarmStart reference_warm_start(const Trajectories& refs, const VariableLayout& layout) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.n_variables());
  for (int k = 0; k < layout.n_drones; ++k) {
    for (int t = 0; t < layout.n_waypoints; ++t) {
      for (int a = 0; a < 3; ++a) v[layout.position(k, t, a)] = refs.at(k, t)[a];
      if (t >= 1 && t + 1 < layout.n_waypoints) {
        v[layout.smooth_epigraph(k, t)] = (refs.at(k, t + 1) - 2.0 * refs.at(k, t) + refs.at(k, t - 1)).norm();
      }
      if (t + 1 < layout.n_waypoints) {
        v[layout.length_epigraph(k, t)] = (refs.at(k, t + 1) - refs.at(k, t)).norm();
      }
    }
  }
  return {v};
}

Trajectories positions_from(const Eigen::VectorXd& v, const VariableLayout& layout) {
  if (v.size() < layout.n_positions()) throw DomainError("positions_from: vector too short");
  Trajectories out(layout.n_drones, layout.n_waypoints);
  for (int k = 0; k < layout.n_drones; ++k) {
    for (int t = 0; t < layout.n_waypoints; ++t) {
      out.at(k, t) = Point3(v[layout.position(k, t, 0)], v[layout.position(k, t, 1)], v[layout.position(k, t, 2)]);
    }
  }
  return out;
}

}  // namespace trsco
