#include "trsco/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace trsco {

void ScenarioParams::validate() const {
  if (n_drones < 1) throw DomainError("ScenarioParams: n_drones must be >= 1");
  if (n_waypoints < 3) throw DomainError("ScenarioParams: n_waypoints must be >= 3");
  if (!(d_safe >= 0.0) || !(d_drone >= 0.0) || !(d_dev >= 0.0)) {
    throw DomainError("ScenarioParams: d_safe, d_drone, d_dev must be >= 0");
  }
  if (!(z_min <= z_max)) throw DomainError("ScenarioParams: z_min must be <= z_max");
  envelope.validate();
}

const char* to_string(ObstacleModel model) {
  return model == ObstacleModel::envelope ? "envelope" : "smoothed";
}

ObstacleModel obstacle_model_from_string(const std::string& name) {
  if (name == "envelope") return ObstacleModel::envelope;
  if (name == "smoothed") return ObstacleModel::smoothed;
  throw DomainError("unknown obstacle model '" + name + "'");
}

bool ValidationReport::has_errors() const {
  return std::any_of(issues.begin(), issues.end(),
                     [](const ValidationIssue& i) { return i.severity == IssueSeverity::error; });
}

std::vector<Strip> strips_for(int grid_size, int n_drones) {
  if (n_drones < 1 || 2 * n_drones > grid_size) {
    throw AllocationError("allocate_waypoints: cannot split a " + std::to_string(grid_size) +
                          "-cell arena into " + std::to_string(n_drones) +
                          " strips at least 2 cells wide");
  }
  const int width = grid_size / n_drones;
  std::vector<Strip> strips;
  strips.reserve(n_drones);
  for (int k = 0; k < n_drones; ++k) {
    const int lo = k * width;
    const int hi = (k == n_drones - 1) ? grid_size - 1 : lo + width - 1;
    strips.push_back({lo, hi});
  }
  return strips;
}

namespace {

std::vector<Point2> resample_polyline(const std::vector<Point2>& vertices, int count) {
  std::vector<double> cumulative(vertices.size(), 0.0);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (vertices[i] - vertices[i - 1]).norm();
  }
  const double total = cumulative.back();
  std::vector<Point2> out;
  out.reserve(count);
  std::size_t seg = 1;
  for (int n = 0; n < count; ++n) {
    const double target = total * static_cast<double>(n) / static_cast<double>(count - 1);
    while (seg + 1 < vertices.size() && cumulative[seg] < target) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double u = len > 0.0 ? std::clamp((target - cumulative[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(vertices[seg - 1] + u * (vertices[seg] - vertices[seg - 1]));
  }
  return out;
}

}  // namespace

PresetPath allocate_waypoints(const CityModel& city, const ScenarioParams& params) {
  params.validate();
  const int s = city.grid_size();
  const auto strips = strips_for(s, params.n_drones);
  const double top = static_cast<double>(s - 1);

  PresetPath preset(params.n_drones, params.n_waypoints);
  for (int k = 0; k < params.n_drones; ++k) {
    const Strip& strip = strips[k];
    const double width = static_cast<double>(strip.hi - strip.lo + 1);
    const double left = strip.lo - 0.5;
    const double lane_a = std::clamp(left + 0.25 * width, double(strip.lo), double(strip.hi));
    const double lane_b = std::clamp(left + 0.75 * width, double(strip.lo), double(strip.hi));
    const std::vector<Point2> serpentine{{lane_a, 0.0}, {lane_a, top}, {lane_b, top}, {lane_b, 0.0}};
    const auto samples = resample_polyline(serpentine, params.n_waypoints);
    for (int t = 0; t < params.n_waypoints; ++t) preset.at(k, t) = samples[t];
  }
  return preset;
}

Scenario make_scenario(CityModel city, const ScenarioParams& params) {
  PresetPath preset = allocate_waypoints(city, params);
  return Scenario{std::move(city), params, std::move(preset)};
}

double obstacle_height(const Scenario& scenario, double x, double y) {
  const auto& city = scenario.city;
  if (scenario.params.obstacle_model == ObstacleModel::smoothed) {
    const double hi = city.grid_size() - 1;
    return smoothed_height(city, std::clamp(x, 0.0, hi), std::clamp(y, 0.0, hi));
  }
  double best = 0.0;
  for (const auto& b : obstacle_blocks(city)) {
    const auto e = building_profile(b, city.grid_size(), x, y, scenario.params.envelope, scenario.params.rises_inside(b));
    best = std::max(best, e.value);
  }
  return best;
}

Trajectories init_reference(const Scenario& scenario) {
  const auto& p = scenario.params;
  Trajectories ref(p.n_drones, p.n_waypoints);
  for (int k = 0; k < p.n_drones; ++k) {
    for (int t = 0; t < p.n_waypoints; ++t) {
      const Point2& w = scenario.preset.at(k, t);
      const double z = std::clamp(obstacle_height(scenario, w.x(), w.y()) + p.d_safe + 1.0,
                                  p.z_min, p.z_max);
      ref.at(k, t) = Point3(w.x(), w.y(), z);
    }
  }
  return ref;
}

namespace {

// Distance from a point to the closed square footprint of cell (i, j).
double distance_to_cell(const Point2& p, int i, int j) {
  const double dx = std::max(0.0, std::abs(p.x() - i) - 0.5);
  const double dy = std::max(0.0, std::abs(p.y() - j) - 0.5);
  return std::hypot(dx, dy);
}

}  // namespace

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  const auto& p = scenario.params;
  const auto& city = scenario.city;
  const int s = city.grid_size();
  const double hi = s - 1;

  if (scenario.preset.n_drones() != p.n_drones || scenario.preset.n_waypoints() != p.n_waypoints) {
    report.issues.push_back({IssueSeverity::error, "dimensions", -1, -1,
                             "preset path dimensions do not match N x T"});
    return report;
  }

  for (int k = 0; k < p.n_drones; ++k) {
    for (int t = 0; t < p.n_waypoints; ++t) {
      const Point2& w = scenario.preset.at(k, t);
      if (!(w.x() >= 0.0 && w.x() <= hi && w.y() >= 0.0 && w.y() <= hi)) {
        report.issues.push_back({IssueSeverity::error, "bounds", k, t, "preset waypoint outside arena"});
        continue;
      }
      // Lowest raw obstacle reachable inside the deviation disk.
      const int reach = static_cast<int>(std::ceil(p.d_dev + 1.0));
      const int ci = static_cast<int>(std::lround(w.x()));
      const int cj = static_cast<int>(std::lround(w.y()));
      double lowest = std::numeric_limits<double>::infinity();
      for (int i = std::max(0, ci - reach); i <= std::min(s - 1, ci + reach); ++i) {
        for (int j = std::max(0, cj - reach); j <= std::min(s - 1, cj + reach); ++j) {
          if (distance_to_cell(w, i, j) <= p.d_dev) lowest = std::min(lowest, city.raw(i, j));
        }
      }
      const double needed = std::max(p.z_min, lowest + p.d_safe);
      if (needed > p.z_max) {
        std::ostringstream msg;
        msg << "waypoint needs z >= " << needed << " but z_max = " << p.z_max;
        report.issues.push_back({IssueSeverity::error, "altitude", k, t, msg.str()});
      }
    }
  }

  if (p.n_drones > 1) {
    double closest = std::numeric_limits<double>::infinity();
    for (int t = 0; t < p.n_waypoints; ++t) {
      for (int k = 0; k < p.n_drones; ++k) {
        for (int m = k + 1; m < p.n_drones; ++m) {
          closest = std::min(closest, (scenario.preset.at(k, t) - scenario.preset.at(m, t)).norm());
        }
      }
    }
    if (p.d_drone > closest) {
      std::ostringstream msg;
      msg << "d_drone = " << p.d_drone << " exceeds the closest preset separation " << closest;
      report.issues.push_back({IssueSeverity::warning, "interdrone", -1, -1, msg.str()});
    }
  }
  return report;
}

}  // namespace trsco
