#include "trsco/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "trsco/metrics.hpp"
#include "trsco/subproblem.hpp"

namespace trsco {

void PlannerSettings::validate() const {
  if (!(c1 > 0.0 && c1 < 1.0)) throw DomainError("PlannerSettings: need 0 < c1 < 1");
  if (!(c2 > 1.0)) throw DomainError("PlannerSettings: need c2 > 1");
  if (!(delta_min > 0.0 && delta_min <= delta0 && delta0 <= delta_max)) {
    throw DomainError("PlannerSettings: need 0 < delta_min <= delta0 <= delta_max");
  }
  if (!(eps_rho > 0.0) || !(eps_x > 0.0)) throw DomainError("PlannerSettings: eps_rho and eps_x must be > 0");
  if (max_outer_iterations < 1) throw DomainError("PlannerSettings: max_outer_iterations must be >= 1");
  if (!(w_delta >= 0.0)) throw DomainError("PlannerSettings: w_delta must be >= 0");
  if (penalty_order < 2) throw DomainError("PlannerSettings: penalty_order must be >= 2");
}

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::enhanced: return "enhanced";
    case Variant::original_trsco: return "original_trsco";
    case Variant::no_trust_region: return "no_trust_region";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  if (name == "enhanced") return Variant::enhanced;
  if (name == "original_trsco") return Variant::original_trsco;
  if (name == "no_trust_region") return Variant::no_trust_region;
  throw DomainError("unknown variant '" + name + "'");
}

const char* to_string(PlanStatus status) {
  return status == PlanStatus::converged ? "converged" : "max_iterations";
}

double update_radius(double delta, double ell, const PlannerSettings& settings) {
  const double factor = ell > settings.eps_rho ? settings.c2 : settings.c1;
  return std::clamp(factor * delta, settings.delta_min, settings.delta_max);
}

bool check_convergence(const Trajectories& prev, const Trajectories& next, double ell,
                       const PlannerSettings& settings) {
  if (!prev.same_shape(next)) throw DomainError("check_convergence: dimension mismatch");
  return prev.max_abs_difference(next) <= settings.eps_x && ell <= settings.eps_rho;
}

namespace {

std::string describe_row(const LinearConstraint& row) {
  std::ostringstream out;
  out << to_string(row.kind) << " row (drone " << row.drone;
  if (row.other_drone >= 0) out << ", other drone " << row.other_drone;
  out << ", waypoint " << row.waypoint;
  if (row.block >= 0) out << ", building " << row.block;
  out << ")";
  return out.str();
}

// The retained row with the largest violation at the (infeasible) solver output.
std::string binding_rows(const ActiveConstraintSet& active, const Trajectories& candidate) {
  std::vector<std::pair<double, const LinearConstraint*>> worst;
  for (const auto& row : active.retained) {
    const double slack = row.slack(candidate);
    if (slack < 0.0) worst.emplace_back(slack, &row);
  }
  std::sort(worst.begin(), worst.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream out;
  const std::size_t shown = std::min<std::size_t>(worst.size(), 3);
  for (std::size_t i = 0; i < shown; ++i) {
    out << (i ? "; " : "") << describe_row(*worst[i].second) << " violated by " << -worst[i].first << " m";
  }
  if (shown == 0) out << "no linear row violated at the last iterate (cone rows conflict)";
  return out.str();
}

}  // namespace

PlanResult plan(const Scenario& scenario, const PlannerSettings& settings, Variant variant,
                const SolverSettings& solver_settings, const ConicSolver* backend,
                const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  settings.validate();
  solver_settings.validate();
  scenario.params.validate();

  const AdmmSolver default_backend;
  const ConicSolver& solver = backend ? *backend : default_backend;
  const VariableLayout layout = scenario.layout();

  const bool filtering = variant == Variant::enhanced;
  const bool trust_region = variant != Variant::no_trust_region;
  const TrustRegionWeights weights{variant == Variant::enhanced ? settings.w_delta : 0.0, 2,
                                   settings.horizontal_trust_region};

  PlanResult result;
  result.variant = variant;
  Trajectories current = init_reference(scenario);
  result.trajectories = current;
  double delta = settings.delta0;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  // Duals of the previous subproblem, indexed by position in the full row list (whose
  // structure is the same at every iteration) plus the trailing cone rows.
  Eigen::VectorXd full_duals;
  Eigen::VectorXd tail_duals;

  for (int q = 0; q < settings.max_outer_iterations; ++q) {
    const auto full = build_constraints(scenario, current);
    const double cap = trust_region ? delta : std::numeric_limits<double>::infinity();
    ActiveConstraintSet active = filtering ? filter_constraints(full, current, delta, scenario, settings.horizontal_trust_region) : keep_all(full);

    const ConicProgram program = assemble_subproblem(active, current, cap, weights, scenario);
    Solution sol;
    try {
      WarmStart warm = reference_warm_start(current, layout);
      const int n_linear = static_cast<int>(active.retained.size());
      if (full_duals.size() == static_cast<Eigen::Index>(full.size()) &&
          n_linear + tail_duals.size() == program.n_rows()) {
        warm.y.resize(program.n_rows());
        for (int i = 0; i < n_linear; ++i) warm.y[i] = full_duals[active.retained_index[i]];
        warm.y.tail(tail_duals.size()) = tail_duals;
      }
      sol = solver.solve(program, solver_settings, warm);
    } catch (const SolverError& e) {
      result.wall_time = elapsed();
      throw PlanningError(std::string("planning aborted at iteration ") + std::to_string(q) + ": " + e.what(),
                          result, program);
    }
    if (!sol.x.allFinite()) {
      result.wall_time = elapsed();
      throw PlanningError("planning aborted at iteration " + std::to_string(q) + ": solver returned a non-finite iterate",
                          result, program);
    }
    Trajectories next = positions_from(sol.x, layout);
    if (sol.y.size() == program.n_rows()) {
      const int n_linear = static_cast<int>(active.retained.size());
      full_duals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full.size()));
      for (int i = 0; i < n_linear; ++i) full_duals[active.retained_index[i]] = sol.y[i];
      tail_duals = sol.y.tail(program.n_rows() - n_linear);
    }
    if (sol.status == SolveStatus::infeasible_detected) {
      result.wall_time = elapsed();
      throw PlanningError("planning aborted at iteration " + std::to_string(q) +
                              ": infeasible subproblem; " + binding_rows(active, next),
                          result, program);
    }

    IterationRecord rec;
    rec.iteration = q;
    rec.delta = cap;
    rec.objective = sol.objective;
    rec.j_smooth = smoothness(next);
    rec.j_length = path_length(next);
    rec.delta_used = sol.x[layout.delta()];
    rec.retained_rows = static_cast<int>(active.retained.size());
    rec.dropped_obstacle = active.dropped_obstacle;
    rec.dropped_interdrone = active.dropped_interdrone;
    rec.total_rows = active.total_before;
    rec.collision_rows_total = active.total_collision_rows;
    rec.collision_rows_retained = active.retained_collision_rows;
    for (const auto& row : active.dropped) {
      rec.max_dropped_violation = std::max(rec.max_dropped_violation, -row.slack(next));
    }
    rec.solve_time = sol.wall_time;
    rec.solver_iterations = sol.iterations;
    rec.solver_status = sol.status;
    rec.step = current.max_abs_difference(next);
    rec.violation = violation(scenario, next);
    result.trace.push_back(rec);
    if (observer) observer(rec, next);

    const bool done = check_convergence(current, next, rec.violation, settings);
    delta = update_radius(delta, rec.violation, settings);
    current = std::move(next);
    result.trajectories = current;
    if (done) {
      result.status = PlanStatus::converged;
      break;
    }
  }
  result.wall_time = elapsed();
  return result;
}

}  // namespace trsco
