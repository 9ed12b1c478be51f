#include "trsco/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trsco/env.hpp"

namespace trsco {

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::obstacle: return "obstacle";
    case ConstraintKind::interdrone: return "interdrone";
    case ConstraintKind::altitude_lo: return "altitude_lo";
    case ConstraintKind::altitude_hi: return "altitude_hi";
    case ConstraintKind::bound: return "bound";
    case ConstraintKind::deviation: return "deviation";
  }
  return "unknown";
}

double LinearConstraint::slack(const Trajectories& trajs) const {
  const int t_count = trajs.n_waypoints();
  double lhs = 0.0;
  for (const auto& [index, coeff] : terms) {
    const int axis = index % 3;
    const int flat = index / 3;
    lhs += coeff * trajs.at(flat / t_count, flat % t_count)[axis];
  }
  return rhs - lhs;
}

LinearConstraint linearize_obstacle(const CityModel& city, const Point3& ref, double d_safe,
                                    int drone, int waypoint, const VariableLayout& layout) {
  const double hi = city.grid_size() - 1;
  if (!(ref.x() >= 0.0 && ref.x() <= hi && ref.y() >= 0.0 && ref.y() <= hi)) {
    throw DomainError("linearize_obstacle: reference outside arena");
  }
  const double h = smoothed_height(city, ref.x(), ref.y());
  const Point2 g = height_gradient(city, ref.x(), ref.y());
  // -z + gx x + gy y <= -(h + d_safe) + gx xr + gy yr
  LinearConstraint row;
  row.kind = ConstraintKind::obstacle;
  row.drone = drone;
  row.waypoint = waypoint;
  row.terms = {{layout.position(drone, waypoint, 0), g.x()},
               {layout.position(drone, waypoint, 1), g.y()},
               {layout.position(drone, waypoint, 2), -1.0}};
  row.rhs = -(h + d_safe) + g.x() * ref.x() + g.y() * ref.y();
  return row;
}

namespace {

// Face of a rising footprint to escape through from (x, y): the nearest one whose exit point
// is inside the arena and not over another cell that cannot be overflown. -1 if none.
int escape_face(const CityModel& city, const Building& building, const ScenarioParams& params, double x, double y) {
  const int size = city.grid_size();
  const Footprint fp = footprint(building, size);
  const double hi = size - 1;
  const double depth[4] = {x - fp.x_lo, fp.x_hi - x, y - fp.y_lo, fp.y_hi - y};
  const Point2 exits[4] = {{fp.x_lo - 0.25, y}, {fp.x_hi + 0.25, y}, {x, fp.y_lo - 0.25}, {x, fp.y_hi + 0.25}};
  int best = -1;
  for (int f = 0; f < 4; ++f) {
    if (!std::isfinite(depth[f])) continue;
    const Point2& e = exits[f];
    if (e.x() < 0.0 || e.x() > hi || e.y() < 0.0 || e.y() > hi) continue;
    if (city.raw_at(e.x(), e.y()) + params.d_safe > params.z_max) continue;
    if (best < 0 || depth[f] < depth[best]) best = f;
  }
  return best;
}

}  // namespace

LinearConstraint linearize_building(const CityModel& city, const Building& building, int block, const Point3& ref,
                                    const ScenarioParams& params, int drone, int waypoint,
                                    const VariableLayout& layout) {
  const int size = city.grid_size();
  const bool rising = params.rises_inside(building);
  SurfaceSample e = building_profile(building, size, ref.x(), ref.y(), params.envelope, rising);
  if (rising && signed_distance(footprint(building, size), ref.x(), ref.y()) < 0.0) {
    const int face = escape_face(city, building, params, ref.x(), ref.y());
    if (face >= 0) e = face_profile(building, size, face, ref.x(), ref.y(), params.envelope);
  }
  // No finite envelope (every face on the border and no escape face): clear the roof.
  if (!std::isfinite(e.value) || !e.gradient.allFinite()) e = {building.height, Point2::Zero()};
  LinearConstraint row;
  row.kind = ConstraintKind::obstacle;
  row.drone = drone;
  row.waypoint = waypoint;
  row.block = block;
  row.terms = {{layout.position(drone, waypoint, 0), e.gradient.x()},
               {layout.position(drone, waypoint, 1), e.gradient.y()},
               {layout.position(drone, waypoint, 2), -1.0}};
  row.rhs = -(e.value + params.d_safe) + e.gradient.x() * ref.x() + e.gradient.y() * ref.y();
  return row;
}

bool building_relevant(const Building& building, int grid_size, const Point2& preset,
                       const ScenarioParams& params) {
  // The signed distance is 1-Lipschitz, so d_dev is the most it can shrink over the disk.
  const double s = signed_distance(footprint(building, grid_size), preset.x(), preset.y()) - params.d_dev;
  return envelope_profile(building.height, s, params.envelope, params.rises_inside(building)) + params.d_safe >
         params.z_min;
}

LinearConstraint linearize_interdrone(const Point3& ref_k, const Point3& ref_m, double d_drone,
                                      int k, int m, int waypoint, const VariableLayout& layout) {
  if (k == m) throw DomainError("linearize_interdrone: k must differ from m");
  const Point3 diff = ref_k - ref_m;
  const double dist = diff.norm();
  Point3 n;
  if (dist > 1e-9) {
    n = diff / dist;
  } else {
    n = Point3(k < m ? 1.0 : -1.0, 0.0, 0.0);
  }
  // -n^T x_k + n^T x_m <= -d_drone
  LinearConstraint row;
  row.kind = ConstraintKind::interdrone;
  row.drone = k;
  row.other_drone = m;
  row.waypoint = waypoint;
  for (int axis = 0; axis < 3; ++axis) {
    if (n[axis] == 0.0) continue;
    row.terms.emplace_back(layout.position(k, waypoint, axis), -n[axis]);
    row.terms.emplace_back(layout.position(m, waypoint, axis), n[axis]);
  }
  row.rhs = -d_drone;
  return row;
}

std::vector<LinearConstraint> box_constraints(const Scenario& scenario) {
  const auto& p = scenario.params;
  const VariableLayout layout = scenario.layout();
  const double hi = scenario.city.grid_size() - 1;
  std::vector<LinearConstraint> rows;
  rows.reserve(static_cast<std::size_t>(10) * p.n_drones * p.n_waypoints);
  auto add = [&](ConstraintKind kind, int k, int t, int axis, double coeff, double rhs) {
    LinearConstraint row;
    row.kind = kind;
    row.drone = k;
    row.waypoint = t;
    row.terms = {{layout.position(k, t, axis), coeff}};
    row.rhs = rhs;
    rows.push_back(std::move(row));
  };
  for (int k = 0; k < p.n_drones; ++k) {
    for (int t = 0; t < p.n_waypoints; ++t) {
      const Point2& w = scenario.preset.at(k, t);
      for (int axis = 0; axis < 2; ++axis) {
        add(ConstraintKind::bound, k, t, axis, -1.0, 0.0);
        add(ConstraintKind::bound, k, t, axis, 1.0, hi);
      }
      add(ConstraintKind::altitude_lo, k, t, 2, -1.0, -p.z_min);
      add(ConstraintKind::altitude_hi, k, t, 2, 1.0, p.z_max);
      for (int axis = 0; axis < 2; ++axis) {
        add(ConstraintKind::deviation, k, t, axis, 1.0, w[axis] + p.d_dev);
        add(ConstraintKind::deviation, k, t, axis, -1.0, p.d_dev - w[axis]);
      }
    }
  }
  return rows;
}

std::vector<LinearConstraint> build_constraints(const Scenario& scenario, const Trajectories& refs) {
  const auto& p = scenario.params;
  const VariableLayout layout = scenario.layout();
  const double hi = scenario.city.grid_size() - 1;
  std::vector<LinearConstraint> rows;
  if (p.obstacle_model == ObstacleModel::envelope) {
    const auto blocks = obstacle_blocks(scenario.city);
    const int size = scenario.city.grid_size();
    for (int k = 0; k < p.n_drones; ++k) {
      for (int t = 0; t < p.n_waypoints; ++t) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
          if (!building_relevant(blocks[b], size, scenario.preset.at(k, t), p)) continue;
          rows.push_back(
              linearize_building(scenario.city, blocks[b], static_cast<int>(b), refs.at(k, t), p, k, t, layout));
        }
      }
    }
  } else {
    for (int k = 0; k < p.n_drones; ++k) {
      for (int t = 0; t < p.n_waypoints; ++t) {
        Point3 ref = refs.at(k, t);
        ref.x() = std::clamp(ref.x(), 0.0, hi);
        ref.y() = std::clamp(ref.y(), 0.0, hi);
        rows.push_back(linearize_obstacle(scenario.city, ref, p.d_safe, k, t, layout));
      }
    }
  }
  for (int t = 0; t < p.n_waypoints; ++t) {
    for (int k = 0; k < p.n_drones; ++k) {
      for (int m = k + 1; m < p.n_drones; ++m) {
        rows.push_back(linearize_interdrone(refs.at(k, t), refs.at(m, t), p.d_drone, k, m, t, layout));
      }
    }
  }
  auto box = box_constraints(scenario);
  rows.insert(rows.end(), std::make_move_iterator(box.begin()), std::make_move_iterator(box.end()));
  return rows;
}

namespace {

bool is_collision_row(ConstraintKind kind) {
  return kind == ConstraintKind::obstacle || kind == ConstraintKind::interdrone;
}

}  // namespace

ActiveConstraintSet filter_constraints(const std::vector<LinearConstraint>& full,
                                       const Trajectories& refs, double delta,
                                       const Scenario& scenario, bool horizontal_trust_region) {
  if (!(delta >= 0.0)) throw DomainError("filter_constraints: delta must be >= 0");
  const auto& p = scenario.params;
  ActiveConstraintSet active;
  active.total_before = static_cast<int>(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& row = full[i];
    bool keep = true;
    if (row.kind == ConstraintKind::obstacle && std::isfinite(delta)) {
      const Point3& r = refs.at(row.drone, row.waypoint);
      // Largest value of the row's affine form over the trust region intersected with the band.
      double c[3] = {0.0, 0.0, 0.0}, lhs = 0.0;
      for (const auto& [index, coeff] : row.terms) {
        c[index % 3] += coeff;
        lhs += coeff * r[index % 3];
      }
      const double z_lo = horizontal_trust_region ? p.z_min : std::max(p.z_min, r.z() - delta);
      const double z_hi = horizontal_trust_region ? p.z_max : std::min(p.z_max, r.z() + delta);
      lhs += std::hypot(c[0], c[1]) * delta + std::max(c[2] * (z_lo - r.z()), c[2] * (z_hi - r.z()));
      keep = lhs > row.rhs;
      if (!keep) ++active.dropped_obstacle;
    } else if (row.kind == ConstraintKind::interdrone) {
      const double dist = (refs.at(row.drone, row.waypoint) - refs.at(row.other_drone, row.waypoint)).norm();
      if (horizontal_trust_region && std::isfinite(delta)) {
        // Smallest n^T (x_k - x_m) when each drone moves up to delta horizontally and
        // anywhere inside the altitude band; n is read back from the row (+n on x_m).
        Point3 n = Point3::Zero();
        const VariableLayout layout = scenario.layout();
        for (const auto& [index, coeff] : row.terms) {
          for (int a = 0; a < 3; ++a) {
            if (index == layout.position(row.other_drone, row.waypoint, a)) n[a] = coeff;
          }
        }
        const double reach = 2.0 * delta * std::hypot(n.x(), n.y()) + std::abs(n.z()) * (p.z_max - p.z_min);
        const Point3 gap = refs.at(row.drone, row.waypoint) - refs.at(row.other_drone, row.waypoint);
        keep = n.x() * gap.x() + n.y() * gap.y() - reach <= p.d_drone;
      } else {
        keep = dist <= p.d_drone + 2.0 * delta;
      }
      if (!keep) ++active.dropped_interdrone;
    }
    if (is_collision_row(row.kind)) {
      ++active.total_collision_rows;
      if (keep) ++active.retained_collision_rows;
    }
    if (keep) active.retained_index.push_back(static_cast<int>(i));
    (keep ? active.retained : active.dropped).push_back(row);
  }
  return active;
}

ActiveConstraintSet keep_all(const std::vector<LinearConstraint>& full) {
  ActiveConstraintSet active;
  active.retained = full;
  active.retained_index.resize(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) active.retained_index[i] = static_cast<int>(i);
  active.total_before = static_cast<int>(full.size());
  for (const auto& row : full) {
    if (is_collision_row(row.kind)) {
      ++active.total_collision_rows;
      ++active.retained_collision_rows;
    }
  }
  return active;
}

ViolationDetail violation_detail(const Scenario& scenario, const Trajectories& trajs) {
  const auto& p = scenario.params;
  if (trajs.n_drones() != p.n_drones || trajs.n_waypoints() != p.n_waypoints) {
    throw DomainError("violation: trajectory dimensions do not match the scenario");
  }
  const double hi = scenario.city.grid_size() - 1;
  ViolationDetail worst;
  auto consider = [&](double amount, ConstraintKind kind, int k, int m, int t) {
    if (amount > worst.value) worst = {amount, kind, k, m, t};
  };
  for (int k = 0; k < p.n_drones; ++k) {
    for (int t = 0; t < p.n_waypoints; ++t) {
      const Point3& x = trajs.at(k, t);
      if (!x.allFinite()) {
        consider(std::numeric_limits<double>::infinity(), ConstraintKind::bound, k, -1, t);
        continue;
      }
      consider(scenario.city.raw_at(x.x(), x.y()) + p.d_safe - x.z(), ConstraintKind::obstacle, k, -1, t);
      consider(p.z_min - x.z(), ConstraintKind::altitude_lo, k, -1, t);
      consider(x.z() - p.z_max, ConstraintKind::altitude_hi, k, -1, t);
      for (int axis = 0; axis < 2; ++axis) {
        consider(-x[axis], ConstraintKind::bound, k, -1, t);
        consider(x[axis] - hi, ConstraintKind::bound, k, -1, t);
      }
      const Point2& w = scenario.preset.at(k, t);
      consider(std::hypot(x.x() - w.x(), x.y() - w.y()) - p.d_dev, ConstraintKind::deviation, k, -1, t);
      for (int m = k + 1; m < p.n_drones; ++m) {
        consider(p.d_drone - (x - trajs.at(m, t)).norm(), ConstraintKind::interdrone, k, m, t);
      }
    }
  }
  return worst;
}

double violation(const Scenario& scenario, const Trajectories& trajs) {
  return violation_detail(scenario, trajs).value;
}

}  // namespace trsco
