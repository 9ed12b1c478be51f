#include <doctest.h>

#include <cmath>
#include <limits>

#include "trsco/metrics.hpp"
#include "trsco/planner.hpp"

using namespace trsco;

namespace {

CityParams params(int s, double density, std::uint64_t seed) {
  CityParams p;
  p.grid_size = s;
  p.building_density = density;
  p.seed = seed;
  return p;
}

Scenario small_scenario(std::uint64_t seed, int n_drones = 2, int n_waypoints = 8) {
  ScenarioParams sp;
  sp.n_drones = n_drones;
  sp.n_waypoints = n_waypoints;
  sp.seed = seed;
  return make_scenario(generate_city(params(24, 0.25, seed)), sp);
}

}  // namespace

TEST_CASE("update_radius: worked examples") {
  PlannerSettings s;
  CHECK(update_radius(2.0, 0.5, s) == 2.0 * 1.3);
  CHECK(update_radius(2.0, 0.0, s) == 2.0 * 0.8);
  CHECK(update_radius(s.delta_max, 1.0, s) == s.delta_max);
  CHECK(update_radius(s.delta_min, 0.0, s) == s.delta_min);
  CHECK(update_radius(2.0, s.eps_rho, s) == 2.0 * 0.8);  // threshold itself contracts
}

TEST_CASE("update_radius: exhaustive grid against the branch rule") {
  PlannerSettings s;
  for (double delta = 0.25; delta <= 25.0; delta += 0.25) {
    for (double ell : {0.0, 1e-4, 9.99e-4, 1e-3, 1.0001e-3, 0.01, 1.0, 30.0}) {
      const double raw = (ell > s.eps_rho ? s.c2 : s.c1) * delta;
      const double expected = raw < s.delta_min ? s.delta_min : (raw > s.delta_max ? s.delta_max : raw);
      CHECK(update_radius(delta, ell, s) == expected);
    }
  }
}

TEST_CASE("check_convergence: conjunction of step and violation") {
  PlannerSettings s;
  Trajectories a(2, 3), b(2, 3);
  CHECK(check_convergence(a, b, 0.0, s));
  b.at(1, 2).y() = 0.5;
  CHECK_FALSE(check_convergence(a, b, 0.0, s));
  b.at(1, 2).y() = 0.005;
  CHECK(check_convergence(a, b, 0.0, s));
  CHECK_FALSE(check_convergence(a, b, 2.0 * s.eps_rho, s));
  CHECK_THROWS_AS(check_convergence(a, Trajectories(2, 4), 0.0, s), DomainError);
}

TEST_CASE("PlannerSettings::validate") {
  PlannerSettings s;
  CHECK_NOTHROW(s.validate());
  s.c1 = 1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = PlannerSettings{};
  s.c2 = 1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = PlannerSettings{};
  s.delta0 = 30.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = PlannerSettings{};
  s.penalty_order = 1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = PlannerSettings{};
  s.eps_x = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::enhanced, Variant::original_trsco, Variant::no_trust_region})
    CHECK(variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(variant_from_string("scs"), DomainError);
}

TEST_CASE("plan: straight preset over an empty city") {
  ScenarioParams sp;
  sp.n_drones = 1;
  sp.n_waypoints = 5;
  Scenario sc = make_scenario(generate_city(params(20, 0.0, 0)), sp);
  // a straight, equally spaced preset with a kink in the reference start
  for (int t = 0; t < 5; ++t) sc.preset.at(0, t) = Point2(6.0 + (t == 2 ? 2.0 : 0.0), 2.0 + 3.0 * t);
  for (Variant v : {Variant::enhanced, Variant::original_trsco, Variant::no_trust_region}) {
    const PlanResult r = plan(sc, PlannerSettings{}, v, SolverSettings{});
    CHECK(r.status == PlanStatus::converged);
    CHECK(violation(sc, r.trajectories) <= 1e-4);  // solver accuracy
    CHECK(smoothness(r.trajectories) <= 1e-3);
    for (int t = 0; t < 5; ++t) CHECK(r.trajectories.at(0, t).z() == doctest::Approx(20.0).epsilon(1e-6));
  }
}

TEST_CASE("plan: a building across the sweep is cleared at every overflown cell") {
  ScenarioParams sp;
  sp.n_drones = 1;
  sp.n_waypoints = 10;
  // 35 m wall across the whole strip: it must be overflown
  const CityModel city = city_from_buildings(params(12, 0.0, 0), {Building{0, 5, 12, 2, 35.0}});
  const Scenario sc = make_scenario(city, sp);
  const PlanResult r = plan(sc, PlannerSettings{}, Variant::enhanced, SolverSettings{});
  CHECK(r.status == PlanStatus::converged);
  CHECK(violation(sc, r.trajectories) <= 1e-3);
  bool overflown = false;
  for (int t = 0; t < 10; ++t) {
    const Point3& p = r.trajectories.at(0, t);
    const double h = city.raw_at(p.x(), p.y());
    if (h > 0.0) {
      overflown = true;
      CHECK(p.z() >= h + sp.d_safe - 1e-3);
    }
  }
  CHECK(overflown);
}

TEST_CASE("plan: outer iteration bound") {
  PlannerSettings s;
  s.max_outer_iterations = 1;
  const PlanResult r = plan(small_scenario(3), s, Variant::enhanced, SolverSettings{});
  CHECK(r.status == PlanStatus::max_iterations);
  CHECK(r.trace.size() == 1);
}

TEST_CASE("plan: trace invariants on seeded scenarios") {
  for (std::uint64_t seed : {1u, 2u}) {
    const Scenario sc = small_scenario(seed);
    for (Variant v : {Variant::enhanced, Variant::original_trsco}) {
      PlannerSettings s;
      std::vector<Trajectories> iterates{init_reference(sc)};
      const PlanResult r = plan(sc, s, v, SolverSettings{}, nullptr,
                                [&](const IterationRecord&, const Trajectories& x) { iterates.push_back(x); });
      REQUIRE_FALSE(r.trace.empty());
      CHECK(r.status == PlanStatus::converged);
      CHECK(violation(sc, r.trajectories) <= s.eps_rho);
      REQUIRE(iterates.size() == r.trace.size() + 1);
      CHECK(r.trace.front().delta == s.delta0);
      for (std::size_t q = 0; q < r.trace.size(); ++q) {
        const IterationRecord& rec = r.trace[q];
        CHECK(rec.iteration == static_cast<int>(q));
        CHECK(rec.delta >= s.delta_min);
        CHECK(rec.delta <= s.delta_max);
        if (q + 1 < r.trace.size()) CHECK(r.trace[q + 1].delta == update_radius(rec.delta, rec.violation, s));
        CHECK(rec.violation == doctest::Approx(violation(sc, iterates[q + 1])).epsilon(1e-12));
        CHECK(rec.step == doctest::Approx(iterates[q].max_abs_difference(iterates[q + 1])).epsilon(1e-12));
        CHECK(rec.retained_rows + rec.dropped_obstacle + rec.dropped_interdrone == rec.total_rows);
        CHECK(rec.collision_rows_retained <= rec.collision_rows_total);
        // horizontal trust-region ball
        for (int k = 0; k < sc.params.n_drones; ++k)
          for (int t = 0; t < sc.params.n_waypoints; ++t) {
            const Point3 d = iterates[q + 1].at(k, t) - iterates[q].at(k, t);
            CHECK(d.head<2>().norm() <= rec.delta + 1e-4);
          }
        if (v == Variant::original_trsco) CHECK(rec.dropped_obstacle + rec.dropped_interdrone == 0);
        CHECK(rec.max_dropped_violation <= 1e-6);
      }
      CHECK(r.trajectories.max_abs_difference(iterates.back()) == 0.0);
    }
  }
}

TEST_CASE("plan: no_trust_region runs without a radius") {
  const PlanResult r = plan(small_scenario(4), PlannerSettings{}, Variant::no_trust_region, SolverSettings{});
  for (const auto& rec : r.trace) CHECK(std::isinf(rec.delta));
}

TEST_CASE("plan: deterministic") {
  const Scenario sc = small_scenario(5);
  const PlanResult a = plan(sc, PlannerSettings{}, Variant::enhanced, SolverSettings{});
  const PlanResult b = plan(sc, PlannerSettings{}, Variant::enhanced, SolverSettings{});
  CHECK(a.trajectories.points() == b.trajectories.points());
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t q = 0; q < a.trace.size(); ++q) {
    CHECK(a.trace[q].objective == b.trace[q].objective);
    CHECK(a.trace[q].solver_iterations == b.trace[q].solver_iterations);
  }
}

TEST_CASE("plan: infeasible subproblem aborts with a partial trace") {
  ScenarioParams sp;
  sp.n_drones = 1;
  sp.n_waypoints = 4;
  sp.d_dev = 0.0;
  // a tower no waypoint can clear (49 + d_safe > z_max) or avoid
  const CityModel city = city_from_buildings(params(10, 0.0, 0), {Building{0, 0, 10, 10, 49.0}});
  const Scenario sc = make_scenario(city, sp);
  bool thrown = false;
  try {
    plan(sc, PlannerSettings{}, Variant::enhanced, SolverSettings{});
  } catch (const PlanningError& e) {
    thrown = true;
    CHECK(std::string(e.what()).size() > 0);
    CHECK(e.partial().variant == Variant::enhanced);
    CHECK(std::string(e.what()).find("infeasible") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("plan: a tower covering the whole arena is overflown") {
  ScenarioParams sp;
  sp.n_drones = 1;
  sp.n_waypoints = 4;
  const CityModel city = city_from_buildings(params(10, 0.0, 0), {Building{0, 0, 10, 10, 40.0}});
  const Scenario sc = make_scenario(city, sp);
  const PlanResult r = plan(sc, PlannerSettings{}, Variant::enhanced, SolverSettings{});
  CHECK(r.status == PlanStatus::converged);
  CHECK(violation(sc, r.trajectories) <= 1e-3);
  for (int t = 0; t < 4; ++t) CHECK(r.trajectories.at(0, t).z() >= 40.0 + sp.d_safe - 1e-3);
}

TEST_CASE("plan: invalid settings raise") {
  PlannerSettings s;
  s.c1 = 2.0;
  CHECK_THROWS_AS(plan(small_scenario(1), s, Variant::enhanced, SolverSettings{}), DomainError);
}
