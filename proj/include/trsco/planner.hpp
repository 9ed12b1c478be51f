#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trsco/conic.hpp"
#include "trsco/convexify.hpp"
#include "trsco/scenario.hpp"

namespace trsco {

struct PlannerSettings {
  double delta0 = 5.0;      // m
  double c1 = 0.8;          // contraction, 0 < c1 < 1
  double c2 = 1.3;          // expansion, c2 > 1
  double eps_rho = 1e-3;    // violation threshold, m
  double delta_min = 0.5;
  double delta_max = 20.0;
  double eps_x = 1e-2;      // step convergence, m
  int max_outer_iterations = 50;
  double w_delta = 1.0;
  int penalty_order = 2;
  // Bound only the horizontal step by delta. Every row is affine in z, so altitude moves
  // carry no linearization error; a 3-D ball is used when false.
  bool horizontal_trust_region = true;

  void validate() const;
};

enum class Variant { enhanced, original_trsco, no_trust_region };

const char* to_string(Variant variant);
/// Throws DomainError on unknown names.
Variant variant_from_string(const std::string& name);

struct IterationRecord {
  int iteration = 0;
  double delta = 0.0;             // radius cap used by this subproblem (inf: none)
  double violation = 0.0;         // l(X^{q+1}) of the new iterate, m
  double objective = 0.0;         // subproblem optimum J
  double j_smooth = 0.0;
  double j_length = 0.0;
  double delta_used = 0.0;        // optimal trust-radius variable
  int retained_rows = 0;
  int dropped_obstacle = 0;
  int dropped_interdrone = 0;
  int total_rows = 0;
  int collision_rows_total = 0;
  int collision_rows_retained = 0;
  double max_dropped_violation = 0.0;  // worst dropped linearized row at the new iterate
  double solve_time = 0.0;        // s
  int solver_iterations = 0;
  SolveStatus solver_status = SolveStatus::optimal;
  double step = 0.0;              // ||X^{q+1} - X^q||_inf
};

enum class PlanStatus { converged, max_iterations };

const char* to_string(PlanStatus status);

struct PlanResult {
  Trajectories trajectories;
  PlanStatus status = PlanStatus::max_iterations;
  std::vector<IterationRecord> trace;
  double wall_time = 0.0;  // s
  Variant variant = Variant::enhanced;
};

/// Raised when the outer loop cannot continue; carries the iterations completed so far.
class PlanningError : public std::runtime_error {
 public:
  PlanningError(const std::string& what, PlanResult partial, std::optional<ConicProgram> subproblem = {})
      : std::runtime_error(what), partial_(std::move(partial)), subproblem_(std::move(subproblem)) {}
  const PlanResult& partial() const { return partial_; }
  /// The subproblem that could not be solved, when one was assembled.
  const std::optional<ConicProgram>& subproblem() const { return subproblem_; }

 private:
  PlanResult partial_;
  std::optional<ConicProgram> subproblem_;
};

/// Expands the radius when the violation exceeds eps_rho, contracts it otherwise; clamped.
double update_radius(double delta, double ell, const PlannerSettings& settings);

/// ||next - prev||_inf <= eps_x and ell <= eps_rho.
bool check_convergence(const Trajectories& prev, const Trajectories& next, double ell,
                       const PlannerSettings& settings);

/// Called after every outer iteration with the record and the new iterate.
using IterationObserver = std::function<void(const IterationRecord&, const Trajectories&)>;

/// Outer trust-region SCP loop for the chosen variant.
PlanResult plan(const Scenario& scenario, const PlannerSettings& settings, Variant variant,
                const SolverSettings& solver_settings, const ConicSolver* backend = nullptr,
                const IterationObserver& observer = {});

}  // namespace trsco
