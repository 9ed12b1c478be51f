#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "trsco/convexify.hpp"

using namespace trsco;

namespace {

CityParams flat_params(int s) {
  CityParams p;
  p.grid_size = s;
  p.building_density = 0.0;
  return p;
}

Scenario scenario_with(const CityModel& city, int n_drones, int n_waypoints, ObstacleModel model) {
  ScenarioParams p;
  p.n_drones = n_drones;
  p.n_waypoints = n_waypoints;
  p.obstacle_model = model;
  return make_scenario(city, p);
}

double coeff(const LinearConstraint& row, int index) {
  double c = 0.0;
  for (const auto& [i, v] : row.terms)
    if (i == index) c += v;
  return c;
}

}  // namespace

TEST_CASE("linearize_obstacle: flat city gives a constant floor") {
  const CityModel c(flat_params(10), std::vector<double>(100, 12.0));
  const VariableLayout layout{1, 3};
  const LinearConstraint row = linearize_obstacle(c, Point3(4.3, 2.1, 30.0), 5.0, 0, 1, layout);
  CHECK(row.kind == ConstraintKind::obstacle);
  CHECK(std::abs(coeff(row, layout.position(0, 1, 0))) < 1e-12);
  CHECK(std::abs(coeff(row, layout.position(0, 1, 1))) < 1e-12);
  CHECK(coeff(row, layout.position(0, 1, 2)) == -1.0);
  CHECK(row.rhs == doctest::Approx(-17.0));  // -z <= -(12 + 5)
}

TEST_CASE("linearize_obstacle: synthetic ramp") {
  std::vector<double> ramp(100);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) ramp[i * 10 + j] = i;
  const CityModel c = CityModel::with_smooth_field(flat_params(10), std::vector<double>(100, 0.0), ramp);
  const VariableLayout layout{1, 3};
  const LinearConstraint row = linearize_obstacle(c, Point3(3.0, 3.0, 40.0), 5.0, 0, 0, layout);
  // z >= 3 + (x - 3) + 5  <=>  x - z <= -5
  CHECK(coeff(row, layout.position(0, 0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(coeff(row, layout.position(0, 0, 1))) < 1e-9);
  CHECK(row.rhs == doctest::Approx(-5.0));
  // at the reference: z >= h(ref) + d_safe
  Trajectories x(1, 3);
  x.at(0, 0) = Point3(3.0, 3.0, 8.0);
  CHECK(row.slack(x) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(linearize_obstacle(c, Point3(-1.0, 3.0, 20.0), 5.0, 0, 0, layout), DomainError);
}

TEST_CASE("linearize_interdrone: direction, tie-break and self-consistency") {
  const VariableLayout layout{3, 2};
  const LinearConstraint row = linearize_interdrone(Point3(10, 0, 30), Point3(0, 0, 30), 5.0, 0, 1, 1, layout);
  // -(x_0 - x_1) <= -5
  CHECK(coeff(row, layout.position(0, 1, 0)) == -1.0);
  CHECK(coeff(row, layout.position(1, 1, 0)) == 1.0);
  CHECK(row.rhs == -5.0);
  Trajectories x(3, 2);
  x.at(0, 1) = Point3(10, 0, 30);
  x.at(1, 1) = Point3(0, 0, 30);
  CHECK(row.slack(x) == doctest::Approx(5.0));

  const LinearConstraint tie = linearize_interdrone(Point3(4, 4, 30), Point3(4, 4, 30), 5.0, 1, 2, 0, layout);
  CHECK(coeff(tie, layout.position(1, 0, 0)) == -1.0);
  CHECK(coeff(tie, layout.position(2, 0, 0)) == 1.0);
  CHECK_THROWS_AS(linearize_interdrone(Point3(0, 0, 0), Point3(1, 1, 1), 5.0, 1, 1, 0, layout), DomainError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int n = 0; n < 200; ++n) {
    Trajectories y(3, 2);
    y.at(0, 0) = Point3(u(rng), u(rng), u(rng));
    y.at(2, 0) = Point3(u(rng), u(rng), u(rng));
    const double dist = (y.at(0, 0) - y.at(2, 0)).norm();
    const LinearConstraint r = linearize_interdrone(y.at(0, 0), y.at(2, 0), 5.0, 0, 2, 0, layout);
    // n^T d = |d|: the reference satisfies its own row exactly when far enough apart
    CHECK(r.slack(y) == doctest::Approx(dist - 5.0));
    // supporting hyperplane: every point satisfying the row is at least d_drone apart
    Trajectories z(3, 2);
    z.at(0, 0) = Point3(u(rng), u(rng), u(rng));
    z.at(2, 0) = Point3(u(rng), u(rng), u(rng));
    if (r.slack(z) >= 0.0) CHECK((z.at(0, 0) - z.at(2, 0)).norm() >= 5.0 - 1e-9);
  }
}

TEST_CASE("box_constraints: count and slack") {
  const CityModel c = generate_city(flat_params(10));
  const Scenario sc = scenario_with(c, 1, 3, ObstacleModel::envelope);
  const auto rows = box_constraints(sc);
  CHECK(rows.size() == 30);
  Trajectories at_preset(1, 3);
  for (int t = 0; t < 3; ++t)
    at_preset.at(0, t) = Point3(sc.preset.at(0, t).x(), sc.preset.at(0, t).y(), sc.params.z_min);
  for (const auto& r : rows) {
    if (r.kind == ConstraintKind::deviation) CHECK(r.slack(at_preset) == doctest::Approx(sc.params.d_dev));
    if (r.kind == ConstraintKind::altitude_lo) CHECK(r.slack(at_preset) == 0.0);
    CHECK(r.slack(at_preset) >= 0.0);
  }
}

TEST_CASE("build_constraints: row inventory") {
  CityParams cp;
  cp.seed = 3;
  const Scenario sc = scenario_with(generate_city(cp), 5, 20, ObstacleModel::smoothed);
  const auto rows = build_constraints(sc, init_reference(sc));
  int obstacle = 0, inter = 0, box = 0;
  for (const auto& r : rows) {
    obstacle += r.kind == ConstraintKind::obstacle;
    inter += r.kind == ConstraintKind::interdrone;
    box += r.kind != ConstraintKind::obstacle && r.kind != ConstraintKind::interdrone;
  }
  CHECK(obstacle == 100);
  CHECK(inter == 20 * 10);
  CHECK(box == 1000);

  const Scenario env = scenario_with(generate_city(cp), 5, 20, ObstacleModel::envelope);
  const auto blocks = obstacle_blocks(env.city);
  int expected = 0;
  for (int k = 0; k < 5; ++k)
    for (int t = 0; t < 20; ++t)
      for (const auto& b : blocks) expected += building_relevant(b, 50, env.preset.at(k, t), env.params);
  int env_obstacle = 0;
  for (const auto& r : build_constraints(env, init_reference(env))) {
    if (r.kind != ConstraintKind::obstacle) continue;
    ++env_obstacle;
    CHECK(r.block >= 0);
    CHECK(r.block < static_cast<int>(blocks.size()));
  }
  CHECK(env_obstacle == expected);
}

TEST_CASE("linearize_building: any point on the feasible side clears the building") {
  const CityModel c = city_from_buildings(flat_params(40), {Building{15, 15, 4, 3, 30.0}, Building{25, 10, 3, 3, 47.0}});
  ScenarioParams p;
  p.n_drones = 1;
  p.n_waypoints = 3;
  const VariableLayout layout{1, 3};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(8.0, 34.0);
  std::uniform_real_distribution<double> uz(0.0, 80.0);
  int tested = 0;
  for (int b = 0; b < 2; ++b) {
    const Building& bd = c.buildings()[b];
    const bool rising = p.rises_inside(bd);
    CHECK(rising == (b == 1));
    for (int n = 0; n < 300; ++n) {
      const Point3 ref(u(rng), u(rng), uz(rng));
      const LinearConstraint row = linearize_building(c, bd, b, ref, p, 0, 1, layout);
      for (int m = 0; m < 30; ++m) {
        Trajectories x(1, 3);
        x.at(0, 1) = Point3(u(rng), u(rng), uz(rng));
        if (row.slack(x) < 0.0) continue;
        ++tested;
        const double profile = building_profile(bd, 40, x.at(0, 1).x(), x.at(0, 1).y(), p.envelope, rising).value;
        CHECK(x.at(0, 1).z() >= profile + p.d_safe - 1e-9);
        // the profile covers the raw block
        if (signed_distance(footprint(bd, 40), x.at(0, 1).x(), x.at(0, 1).y()) <= 0.0)
          CHECK(x.at(0, 1).z() >= bd.height + p.d_safe - 1e-9);
      }
    }
  }
  CHECK(tested > 1000);
}

TEST_CASE("linearize_building: escape face avoids the arena border and blocked exits") {
  // tall block against the left border, a second tall block above it
  const CityModel c =
      city_from_buildings(flat_params(20), {Building{0, 5, 4, 4, 48.0}, Building{0, 9, 4, 3, 48.0}});
  ScenarioParams p;
  p.n_drones = 1;
  p.n_waypoints = 3;
  const VariableLayout layout{1, 3};
  // reference near the top face (which leads into the second block) and the left border
  const Point3 ref(0.2, 8.0, 40.0);
  const LinearConstraint row = linearize_building(c, c.buildings()[0], 0, ref, p, 0, 0, layout);
  // the only admissible exits are the bottom (y_lo) and right (x_hi) faces; the nearer is x_hi
  CHECK(coeff(row, layout.position(0, 0, 0)) < 0.0);
  CHECK(std::abs(coeff(row, layout.position(0, 0, 1))) < 1e-12);
}

TEST_CASE("building_relevant: irrelevant blocks never reach z_min over the deviation disk") {
  CityParams cp;
  cp.seed = 12;
  const CityModel c = generate_city(cp);
  ScenarioParams p;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 49.0);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  int irrelevant = 0;
  for (int n = 0; n < 200; ++n) {
    const Point2 w(u(rng), u(rng));
    for (const auto& b : c.buildings()) {
      if (building_relevant(b, 50, w, p)) continue;
      ++irrelevant;
      for (int m = 0; m < 10; ++m) {
        const double r = p.d_dev * std::sqrt(rad(rng)), a = ang(rng);
        const double v = building_profile(b, 50, w.x() + r * std::cos(a), w.y() + r * std::sin(a), p.envelope,
                                          p.rises_inside(b)).value;
        CHECK(v + p.d_safe <= p.z_min + 1e-9);
      }
    }
  }
  CHECK(irrelevant > 0);
}

TEST_CASE("filter_constraints: worked examples") {
  const CityModel c = generate_city(flat_params(200));
  ScenarioParams p;
  p.n_drones = 2;
  p.n_waypoints = 3;
  p.obstacle_model = ObstacleModel::smoothed;
  const Scenario sc = make_scenario(c, p);
  Trajectories refs(2, 3);
  for (int t = 0; t < 3; ++t) {
    refs.at(0, t) = Point3(10.0, 10.0 + t, 50.0);
    refs.at(1, t) = Point3(110.0, 10.0 + t, 50.0);
  }
  const auto full = build_constraints(sc, refs);
  for (bool horizontal : {true, false}) {
    const auto active = filter_constraints(full, refs, 5.0, sc, horizontal);
    CHECK(active.dropped_interdrone == 3);
    CHECK(active.dropped_obstacle == 6);
    CHECK(active.retained_collision_rows == 0);
    CHECK(active.total_collision_rows == 9);
    CHECK(active.retained.size() + active.dropped.size() == full.size());
    CHECK(active.retained_index.size() == active.retained.size());
    const auto all = filter_constraints(full, refs, std::numeric_limits<double>::infinity(), sc, horizontal);
    CHECK(all.retained.size() == full.size());
  }
  const auto kept = keep_all(full);
  CHECK(kept.retained.size() == full.size());
  CHECK(kept.retained_collision_rows == 9);
  CHECK_THROWS_AS(filter_constraints(full, refs, -1.0, sc), DomainError);
}

TEST_CASE("filter_constraints: dropped rows cannot bind inside the trust region") {
  // Soundness oracle: sample points in the trust region (horizontal disk of radius delta around
  // the reference, altitude anywhere in the band, or the 3-D ball) and evaluate every dropped row.
  CityParams cp;
  cp.seed = 6;
  for (auto model : {ObstacleModel::envelope, ObstacleModel::smoothed}) {
    const Scenario sc = scenario_with(generate_city(cp), 5, 20, model);
    const Trajectories refs = init_reference(sc);
    const auto full = build_constraints(sc, refs);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (bool horizontal : {true, false}) {
      for (double delta : {0.5, 2.0, 5.0}) {
        const auto active = filter_constraints(full, refs, delta, sc, horizontal);
        CHECK(active.dropped.size() > 0);
        for (int n = 0; n < 40; ++n) {
          Trajectories x(5, 20);
          for (int k = 0; k < 5; ++k)
            for (int t = 0; t < 20; ++t) {
              Point3 d;
              do d = Point3(unit(rng), unit(rng), horizontal ? 0.0 : unit(rng));
              while (d.norm() > 1.0);
              Point3 q = refs.at(k, t) + delta * d;
              if (horizontal) q.z() = sc.params.z_min + 0.5 * (unit(rng) + 1.0) * (sc.params.z_max - sc.params.z_min);
              q.z() = std::max(q.z(), sc.params.z_min);
              x.at(k, t) = q;
            }
          for (const auto& row : active.dropped) {
            INFO("kind ", static_cast<int>(row.kind), " model ", static_cast<int>(model), " horizontal ", horizontal, " delta ", delta);
            CHECK(row.slack(x) >= -1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("filter_constraints: retained set grows with the radius") {
  CityParams cp;
  cp.seed = 8;
  const Scenario sc = scenario_with(generate_city(cp), 5, 20, ObstacleModel::envelope);
  const Trajectories refs = init_reference(sc);
  const auto full = build_constraints(sc, refs);
  std::size_t previous = 0;
  for (double delta : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto active = filter_constraints(full, refs, delta, sc);
    CHECK(active.retained.size() >= previous);
    previous = active.retained.size();
  }
}

TEST_CASE("violation: worked examples") {
  CityParams cp = flat_params(20);
  ScenarioParams p;
  p.n_drones = 2;
  p.n_waypoints = 4;
  const CityModel c = city_from_buildings(cp, {Building{2, 0, 3, 3, 30.0}});
  const Scenario sc = make_scenario(c, p);
  Trajectories x(2, 4);
  for (int k = 0; k < 2; ++k)
    for (int t = 0; t < 4; ++t) x.at(k, t) = Point3(sc.preset.at(k, t).x(), sc.preset.at(k, t).y(), 40.0);
  CHECK(violation(sc, x) == 0.0);

  Trajectories y = x;
  y.at(0, 0).z() = 30.0 + 5.0 - 2.0;  // preset (2.75, 0) is over the building
  REQUIRE(c.raw_at(y.at(0, 0).x(), y.at(0, 0).y()) == 30.0);
  CHECK(violation(sc, y) == doctest::Approx(2.0));
  const ViolationDetail d = violation_detail(sc, y);
  CHECK(d.kind == ConstraintKind::obstacle);
  CHECK(d.drone == 0);
  CHECK(d.waypoint == 0);

  Trajectories z = x;
  z.at(1, 2) = z.at(0, 2) + Point3(4.0, 0.0, 0.0);
  CHECK(violation(sc, z) >= 1.0);
  CHECK_THROWS_AS(violation(sc, Trajectories(1, 4)), DomainError);
}
