#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trsco/scenario.hpp"
#include "trsco/types.hpp"

namespace trsco {

enum class ConstraintKind { obstacle, interdrone, altitude_lo, altitude_hi, bound, deviation };

const char* to_string(ConstraintKind kind);

/// One-sided affine row over the stacked decision vector: sum(coeff * v[index]) <= rhs.
/// Rows only touch position variables, so they can be evaluated on Trajectories directly.
struct LinearConstraint {
  ConstraintKind kind = ConstraintKind::bound;
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  int drone = -1;
  int other_drone = -1;  // interdrone rows only
  int waypoint = -1;
  int block = -1;        // envelope obstacle rows: index into obstacle_blocks(city)

  /// rhs - a^T v; non-negative iff the row holds.
  double slack(const Trajectories& trajs) const;
};

struct ActiveConstraintSet {
  std::vector<LinearConstraint> retained;
  std::vector<int> retained_index;  // position of each retained row in the full list
  std::vector<LinearConstraint> dropped;
  int dropped_obstacle = 0;
  int dropped_interdrone = 0;
  int total_before = 0;
  int total_collision_rows = 0;     // obstacle + interdrone rows before filtering
  int retained_collision_rows = 0;  // obstacle + interdrone rows after filtering
};

/// z >= h(ref) + grad h(ref) . (p - ref) + d_safe on the smoothed field h. Requires the
/// reference inside the arena.
LinearConstraint linearize_obstacle(const CityModel& city, const Point3& ref, double d_safe,
                                    int drone, int waypoint, const VariableLayout& layout);

/// Tangent plane of one building profile: z >= E(ref) + grad E(ref) . (p - ref) + d_safe.
/// The profile is concave, so every point satisfying the row clears that building. For a
/// reference inside a footprint that cannot be overflown, the row is the face profile of the
/// nearest face whose exit is not itself blocked by such a building.
LinearConstraint linearize_building(const CityModel& city, const Building& building, int block, const Point3& ref,
                                    const ScenarioParams& params, int drone, int waypoint,
                                    const VariableLayout& layout);

/// True when the building's profile can exceed z_min - d_safe somewhere in the deviation disk
/// around `preset`; other buildings never constrain that waypoint.
bool building_relevant(const Building& building, int grid_size, const Point2& preset,
                       const ScenarioParams& params);

/// Supporting hyperplane n^T (x_k - x_m) >= d_drone with n the unit reference separation
/// direction; coincident references fall back to +/- x axis (sign + when k < m).
LinearConstraint linearize_interdrone(const Point3& ref_k, const Point3& ref_m, double d_drone,
                                      int k, int m, int waypoint, const VariableLayout& layout);

/// Arena bounds, altitude band and per-axis deviation rows: 10 rows per waypoint.
std::vector<LinearConstraint> box_constraints(const Scenario& scenario);

/// Linearizes every obstacle and interdrone constraint around `refs` and appends the box rows.
/// The envelope model emits one row per relevant building and waypoint.
std::vector<LinearConstraint> build_constraints(const Scenario& scenario, const Trajectories& refs);

/// Drops obstacle/interdrone rows that cannot bind inside the trust region of radius delta.
/// With a horizontal trust region the altitude is only bounded below by z_min.
ActiveConstraintSet filter_constraints(const std::vector<LinearConstraint>& full,
                                       const Trajectories& refs, double delta,
                                       const Scenario& scenario, bool horizontal_trust_region = true);

/// Keeps every row (no filtering); counts are filled in the same way.
ActiveConstraintSet keep_all(const std::vector<LinearConstraint>& full);

struct ViolationDetail {
  double value = 0.0;  // max positive violation, m
  ConstraintKind kind = ConstraintKind::bound;
  int drone = -1;
  int other_drone = -1;
  int waypoint = -1;
};

/// Max positive violation of the original constraints: raw-height clearance at the nearest
/// cell, Euclidean inter-drone distance, altitude band, arena bounds, Euclidean deviation.
double violation(const Scenario& scenario, const Trajectories& trajs);
ViolationDetail violation_detail(const Scenario& scenario, const Trajectories& trajs);

}  // namespace trsco
