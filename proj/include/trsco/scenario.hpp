#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trsco/env.hpp"
#include "trsco/types.hpp"

namespace trsco {

/// How obstacle clearance is convexified: tangent planes of per-building concave profiles
/// (`envelope`), or one first-order row on the smoothed height field per waypoint (`smoothed`).
enum class ObstacleModel { envelope, smoothed };

const char* to_string(ObstacleModel model);
/// Throws DomainError on unknown names.
ObstacleModel obstacle_model_from_string(const std::string& name);

struct ScenarioParams {
  int n_drones = 5;       // N
  int n_waypoints = 20;   // T
  double d_safe = 5.0;    // clearance above buildings, m
  double d_drone = 5.0;   // inter-drone separation, m
  double d_dev = 3.0;     // max horizontal deviation from the preset waypoint, m
  double z_min = 20.0;
  double z_max = 50.0;
  std::uint64_t seed = 0;
  ObstacleModel obstacle_model = ObstacleModel::envelope;
  EnvelopeShape envelope;

  void validate() const;

  /// Buildings this tall cannot be overflown; their profile keeps rising inside the footprint.
  bool rises_inside(const Building& b) const { return b.height + d_safe > z_max; }
};

/// Preset horizontal sweep waypoints, one sequence of T points per drone.
class PresetPath {
 public:
  PresetPath() = default;
  PresetPath(int n_drones, int n_waypoints)
      : n_drones_(n_drones),
        n_waypoints_(n_waypoints),
        points_(static_cast<std::size_t>(n_drones) * n_waypoints, Point2::Zero()) {}

  int n_drones() const { return n_drones_; }
  int n_waypoints() const { return n_waypoints_; }
  Point2& at(int k, int t) { return points_[static_cast<std::size_t>(k) * n_waypoints_ + t]; }
  const Point2& at(int k, int t) const {
    return points_[static_cast<std::size_t>(k) * n_waypoints_ + t];
  }

 private:
  int n_drones_ = 0;
  int n_waypoints_ = 0;
  std::vector<Point2> points_;
};

struct Scenario {
  CityModel city;
  ScenarioParams params;
  PresetPath preset;

  VariableLayout layout() const { return {params.n_drones, params.n_waypoints}; }
};

/// Column band [lo, hi] (cell indices) of drone k's strip.
struct Strip {
  int lo = 0;
  int hi = 0;
};

std::vector<Strip> strips_for(int grid_size, int n_drones);

/// Splits the arena into N equal-width vertical strips and gives each drone a two-lane
/// serpentine sweep of its strip, resampled to T waypoints by arc length.
PresetPath allocate_waypoints(const CityModel& city, const ScenarioParams& params);

/// Composes a scenario from a city and parameters using allocate_waypoints.
Scenario make_scenario(CityModel city, const ScenarioParams& params);

/// Obstacle height seen by the chosen model at (x, y): the positive part of the largest
/// building profile, or the smoothed field (query clamped into the arena).
double obstacle_height(const Scenario& scenario, double x, double y);

/// Reference X^0: preset horizontal positions at z0 = clamp(h + d_safe + 1, z_min, z_max)
/// with h = obstacle_height.
Trajectories init_reference(const Scenario& scenario);

enum class IssueSeverity { error, warning };

struct ValidationIssue {
  IssueSeverity severity = IssueSeverity::error;
  std::string kind;
  int drone = -1;
  int waypoint = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has_errors() const;
};

ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace trsco
