#include "trsco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "trsco/convexify.hpp"
#include "trsco/planner.hpp"
#include "trsco/scenario.hpp"

namespace trsco {

void FovParams::validate() const {
  if (!(half_angle > 0.0 && half_angle < 90.0)) throw DomainError("FovParams: half_angle must lie in (0, 90)");
  if (!(cell_area > 0.0)) throw DomainError("FovParams: cell_area must be > 0");
}

double path_length(const Trajectories& trajs) {
  if (trajs.n_drones() > 0 && trajs.n_waypoints() < 2) throw DomainError("path_length: need T >= 2");
  double total = 0.0;
  for (int k = 0; k < trajs.n_drones(); ++k) {
    for (int t = 0; t + 1 < trajs.n_waypoints(); ++t) total += (trajs.at(k, t + 1) - trajs.at(k, t)).norm();
  }
  return total;
}

double smoothness(const Trajectories& trajs) {
  if (trajs.n_drones() > 0 && trajs.n_waypoints() < 3) throw DomainError("smoothness: need T >= 3");
  double total = 0.0;
  for (int k = 0; k < trajs.n_drones(); ++k) {
    for (int t = 1; t + 1 < trajs.n_waypoints(); ++t) {
      total += (trajs.at(k, t + 1) - 2.0 * trajs.at(k, t) + trajs.at(k, t - 1)).norm();
    }
  }
  return total;
}

double coverage_area(const Trajectories& trajs, const CityModel& city, const FovParams& fov) {
  fov.validate();
  const int s = city.grid_size();
  std::vector<char> covered(static_cast<std::size_t>(s) * s, 0);
  const double slope = std::tan(fov.half_angle * std::numbers::pi / 180.0);
  long count = 0;
  for (const auto& p : trajs.points()) {
    const double r = std::max(0.0, p.z()) * slope;
    // Tolerance keeps lattice points exactly on the rim inside under round-off.
    const double r2 = r * r + 1e-9;
    const int i0 = std::max(0, static_cast<int>(std::ceil(p.x() - r)));
    const int i1 = std::min(s - 1, static_cast<int>(std::floor(p.x() + r)));
    const int j0 = std::max(0, static_cast<int>(std::ceil(p.y() - r)));
    const int j1 = std::min(s - 1, static_cast<int>(std::floor(p.y() + r)));
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        const double dx = i - p.x();
        const double dy = j - p.y();
        auto& cell = covered[static_cast<std::size_t>(i) * s + j];
        if (!cell && dx * dx + dy * dy <= r2) {
          cell = 1;
          ++count;
        }
      }
    }
  }
  return static_cast<double>(count) * fov.cell_area;
}

double min_interdrone_distance(const Trajectories& trajs) {
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trajs.n_waypoints(); ++t) {
    for (int k = 0; k < trajs.n_drones(); ++k) {
      for (int m = k + 1; m < trajs.n_drones(); ++m) {
        best = std::min(best, (trajs.at(k, t) - trajs.at(m, t)).norm());
      }
    }
  }
  return best;
}

MetricsRow metrics_row(const PlanResult& result, const Scenario& scenario, const FovParams& fov) {
  MetricsRow row;
  row.variant = to_string(result.variant);
  row.status = to_string(result.status);
  row.total_path_length = path_length(result.trajectories);
  row.total_smoothness = smoothness(result.trajectories);
  row.coverage_area = coverage_area(result.trajectories, scenario.city, fov);
  row.min_interdrone_distance = min_interdrone_distance(result.trajectories);
  row.max_violation = violation(scenario, result.trajectories);
  row.calculation_time = result.wall_time;
  row.outer_iterations = static_cast<int>(result.trace.size());
  return row;
}

MetricsReport report(const std::vector<PlanResult>& results, const Scenario& scenario, const FovParams& fov) {
  if (results.empty()) throw DomainError("report: no results");
  MetricsReport out;
  out.grid_size = scenario.city.grid_size();
  out.n_drones = scenario.params.n_drones;
  out.n_waypoints = scenario.params.n_waypoints;
  out.city_seed = scenario.city.params().seed;
  out.scenario_seed = scenario.params.seed;
  out.half_angle = fov.half_angle;
  for (const auto& r : results) out.rows.push_back(metrics_row(r, scenario, fov));
  return out;
}

std::string MetricsReport::table() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-15s %14s %12s %17s %12s %12s %11s %6s\n", "Method", "Status",
                "PathLength(m)", "Smooth(m)", "CoverageArea(m2)", "MinSep(m)", "MaxViol(m)", "CalcTime(s)",
                "Iters");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-16s %-15s %14.2f %12.4f %17.1f %12.3f %12.2e %11.4f %6d\n",
                  r.variant.c_str(), r.status.c_str(), r.total_path_length, r.total_smoothness, r.coverage_area,
                  r.min_interdrone_distance, r.max_violation, r.calculation_time, r.outer_iterations);
    out << line;
  }
  return out.str();
}

}  // namespace trsco
