#pragma once

#include <string>
#include <vector>

#include "trsco/env.hpp"
#include "trsco/types.hpp"

namespace trsco {

struct Scenario;
struct PlanResult;

struct FovParams {
  double half_angle = 22.5;  // degrees
  double cell_area = 1.0;    // m^2

  void validate() const;
};

/// Sum over drones of the polyline length through the waypoints.
double path_length(const Trajectories& trajs);

/// Sum over drones of ||x(t+1) - 2x(t) + x(t-1)||_2.
double smoothness(const Trajectories& trajs);

/// Area of the cells whose centers fall inside at least one ground footprint disk of radius
/// z tan(half_angle) around a waypoint.
double coverage_area(const Trajectories& trajs, const CityModel& city, const FovParams& fov);

/// Minimum pairwise distance at equal waypoint index; +inf with fewer than two drones.
double min_interdrone_distance(const Trajectories& trajs);

struct MetricsRow {
  std::string variant;
  std::string status;
  double total_path_length = 0.0;
  double total_smoothness = 0.0;
  double coverage_area = 0.0;
  double min_interdrone_distance = 0.0;
  double max_violation = 0.0;
  double calculation_time = 0.0;
  int outer_iterations = 0;
};

struct MetricsReport {
  int grid_size = 0;
  int n_drones = 0;
  int n_waypoints = 0;
  std::uint64_t city_seed = 0;
  std::uint64_t scenario_seed = 0;
  double half_angle = 0.0;
  std::vector<MetricsRow> rows;

  /// Plain-text table with one line per variant.
  std::string table() const;
};

MetricsRow metrics_row(const PlanResult& result, const Scenario& scenario, const FovParams& fov);

MetricsReport report(const std::vector<PlanResult>& results, const Scenario& scenario, const FovParams& fov);

}  // namespace trsco
