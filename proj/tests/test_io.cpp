#include <doctest.h>

#include <limits>
#include <sstream>

#include "trsco/io.hpp"

using namespace trsco;

TEST_CASE("parameter documents round-trip") {
  CityParams c;
  c.grid_size = 33;
  c.building_density = 0.2;
  c.seed = 12345678901234ULL;
  const CityParams c2 = city_params_from_json(to_json(c));
  CHECK(c2.grid_size == 33);
  CHECK(c2.building_density == 0.2);
  CHECK(c2.seed == c.seed);

  ScenarioParams s;
  s.n_drones = 3;
  s.d_dev = 2.5;
  s.obstacle_model = ObstacleModel::smoothed;
  s.envelope.skirt = 3.0;
  const ScenarioParams s2 = scenario_params_from_json(to_json(s));
  CHECK(s2.n_drones == 3);
  CHECK(s2.d_dev == 2.5);
  CHECK(s2.obstacle_model == ObstacleModel::smoothed);
  CHECK(s2.envelope.skirt == 3.0);

  PlannerSettings p;
  p.c1 = 0.7;
  p.horizontal_trust_region = false;
  const PlannerSettings p2 = planner_settings_from_json(to_json(p));
  CHECK(p2.c1 == 0.7);
  CHECK_FALSE(p2.horizontal_trust_region);

  SolverSettings v;
  v.rho = 0.5;
  v.scaling = false;
  const SolverSettings v2 = solver_settings_from_json(to_json(v));
  CHECK(v2.rho == 0.5);
  CHECK_FALSE(v2.scaling);

  FovParams f;
  f.half_angle = 30.0;
  CHECK(fov_from_json(to_json(f)).half_angle == 30.0);
}

TEST_CASE("strict readers reject unknown keys and wrong types") {
  CHECK_THROWS_AS(city_params_from_json(Json{{"grid_sise", 50}}), FormatError);
  CHECK_THROWS_AS(city_params_from_json(Json{{"grid_size", "50"}}), FormatError);
  CHECK_THROWS_AS(city_params_from_json(Json{{"grid_size", 50.5}}), FormatError);
  CHECK_THROWS_AS(city_params_from_json(Json{{"seed", -1}}), FormatError);
  CHECK_THROWS_AS(city_params_from_json(Json::array()), FormatError);
  CHECK_THROWS_AS(scenario_params_from_json(Json{{"obstacle_model", "voxel"}}), FormatError);
  CHECK_THROWS_AS(scenario_params_from_json(Json{{"envelope", {{"skirt", 1.0}, {"width", 2.0}}}}), FormatError);
  CHECK_THROWS_AS(planner_settings_from_json(Json{{"horizontal_trust_region", 1}}), FormatError);
  CHECK_THROWS_AS(solver_settings_from_json(Json{{"rho", nullptr}}), FormatError);
  CHECK_THROWS_AS(fov_from_json(Json{{"half_angle", 10.0}, {"extra", 1}}), FormatError);
  // missing keys keep their defaults
  CHECK(city_params_from_json(Json::object()).grid_size == CityParams{}.grid_size);
  CHECK(planner_settings_from_json(Json{{"c1", 0.5}}).c2 == PlannerSettings{}.c2);
}

TEST_CASE("city document round-trip") {
  CityParams p;
  p.grid_size = 20;
  p.seed = 4;
  const CityModel c = generate_city(p);
  const CityModel back = city_from_json(Json::parse(dump(city_to_json(c))));
  CHECK(back.raw_heights() == c.raw_heights());
  CHECK(back.smooth_heights() == c.smooth_heights());
  REQUIRE(back.buildings().size() == c.buildings().size());
  for (std::size_t i = 0; i < c.buildings().size(); ++i) {
    CHECK(back.buildings()[i].x0 == c.buildings()[i].x0);
    CHECK(back.buildings()[i].height == c.buildings()[i].height);
  }
  Json broken = city_to_json(c);
  broken["raw_heights"].erase(0);
  CHECK_THROWS_AS(city_from_json(broken), FormatError);
}

TEST_CASE("trajectories JSON and CSV") {
  Trajectories x(2, 3);
  for (int k = 0; k < 2; ++k)
    for (int t = 0; t < 3; ++t) x.at(k, t) = Point3(k + 0.1 * t, 1.0 / 3.0 + t, 20.0 + k);
  const Trajectories back = trajectories_from_json(Json::parse(dump(trajectories_to_json(x))));
  CHECK(back.points() == x.points());
  const std::string csv = trajectories_csv(x);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "drone,t,x_m,y_m,z_m");
  int rows = 0, last_key = -1;
  while (std::getline(in, line)) {
    const int drone = std::stoi(line.substr(0, line.find(',')));
    const int t = std::stoi(line.substr(line.find(',') + 1));
    CHECK(drone * 3 + t > last_key);
    last_key = drone * 3 + t;
    ++rows;
  }
  CHECK(rows == 6);
  CHECK_THROWS_AS(trajectories_from_json(Json{{"n_drones", 1}}), FormatError);

  PresetPath preset(1, 2);
  preset.at(0, 1) = Point2(2.0, 3.0);
  CHECK(preset_csv(preset).rfind("drone,t,x,y\n", 0) == 0);
}

TEST_CASE("trace and result documents") {
  PlanResult r;
  r.trajectories = Trajectories(1, 3);
  IterationRecord rec;
  rec.delta = std::numeric_limits<double>::infinity();
  rec.solve_time = 0.25;
  r.trace.push_back(rec);
  r.wall_time = 1.5;
  const Json with = plan_result_to_json(r, true);
  CHECK(with["trace"][0]["delta"].is_null());
  CHECK(with.contains("wall_time_s"));
  CHECK(with["trace"][0].contains("solve_time_s"));
  const Json without = plan_result_to_json(r, false);
  CHECK_FALSE(without.contains("wall_time_s"));
  CHECK_FALSE(without["trace"][0].contains("solve_time_s"));

  MetricsReport m;
  MetricsRow row;
  row.min_interdrone_distance = std::numeric_limits<double>::infinity();
  row.calculation_time = 2.0;
  m.rows.push_back(row);
  CHECK(metrics_to_json(m)["variants"][0]["min_interdrone_distance"].is_null());
  CHECK(metrics_to_json(m)["variants"][0].contains("calculation_time"));
  CHECK_FALSE(metrics_to_json(m, false)["variants"][0].contains("calculation_time"));
}

TEST_CASE("dump is canonical") {
  const Json a = Json::parse(R"({"b": 1, "a": [1, 2]})");
  const Json b = Json::parse(R"({"a": [1, 2], "b": 1})");
  CHECK(dump(a) == dump(b));
  CHECK(dump(a).back() == '\n');
}
