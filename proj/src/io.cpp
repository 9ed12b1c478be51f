#include "trsco/io.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace trsco {

namespace {

// Reads known keys from an object and rejects everything else.
class StrictObject {
 public:
  StrictObject(const Json& doc, std::string context) : doc_(doc), context_(std::move(context)) {
    if (!doc_.is_object()) throw FormatError(context_ + ": expected a JSON object");
  }

  void read(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(key, "a number");
      out = v->get<double>();
    }
  }
  void read(const char* key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "an integer");
      const auto value = v->get<std::int64_t>();
      if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
        fail(key, "an integer in range");
      }
      out = static_cast<int>(value);
    }
  }
  void read(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "a boolean");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(key, "a string");
      out = v->get<std::string>();
    }
  }
  const Json* find(const char* key) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  /// Raises on keys that were never asked for.
  void finish() const {
    for (const auto& item : doc_.items()) {
      if (!seen_.count(item.key())) throw FormatError(context_ + ": unknown field '" + item.key() + "'");
    }
  }

 private:
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw FormatError(context_ + "." + key + ": expected " + what);
  }

  const Json& doc_;
  std::string context_;
  std::set<std::string> seen_;
};

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const Json& member(const Json& doc, const char* key, const std::string& context) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(context + ": missing field '" + key + "'");
  return *it;
}

Json sparse_to_json(const Eigen::SparseMatrix<double>& m) {
  Json triplets = Json::array();
  for (int j = 0; j < m.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) {
      triplets.push_back({it.row(), it.col(), it.value()});
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"triplets", triplets}};
}

Eigen::SparseMatrix<double> sparse_from_json(const Json& doc, const std::string& context) {
  const int rows = member(doc, "rows", context).get<int>();
  const int cols = member(doc, "cols", context).get<int>();
  if (rows < 0 || cols < 0) throw FormatError(context + ": negative dimension");
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& t : member(doc, "triplets", context)) {
    if (!t.is_array() || t.size() != 3) throw FormatError(context + ": triplets must be [i, j, v]");
    const int i = t[0].get<int>();
    const int j = t[1].get<int>();
    if (i < 0 || i >= rows || j < 0 || j >= cols) throw FormatError(context + ": triplet index out of range");
    triplets.emplace_back(i, j, t[2].get<double>());
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const Json& doc) {
  const auto values = doc.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

ConeKind cone_kind_from_string(const std::string& name) {
  if (name == "zero") return ConeKind::zero;
  if (name == "nonneg") return ConeKind::nonneg;
  if (name == "soc") return ConeKind::soc;
  throw FormatError("unknown cone kind '" + name + "'");
}

}  // namespace

Json to_json(const CityParams& p) {
  return {{"grid_size", p.grid_size},   {"building_density", p.building_density},
          {"height_min", p.height_min}, {"height_max", p.height_max},
          {"smoothing_radius", p.smoothing_radius}, {"seed", p.seed}};
}

Json to_json(const ScenarioParams& p) {
  return {{"n_drones", p.n_drones}, {"n_waypoints", p.n_waypoints}, {"d_safe", p.d_safe},
          {"d_drone", p.d_drone},   {"d_dev", p.d_dev},             {"z_min", p.z_min},
          {"z_max", p.z_max},       {"seed", p.seed},
          {"obstacle_model", to_string(p.obstacle_model)},
          {"envelope", {{"skirt", p.envelope.skirt}, {"slope", p.envelope.slope}}}};
}

Json to_json(const PlannerSettings& s) {
  return {{"delta0", s.delta0},       {"c1", s.c1},
          {"c2", s.c2},               {"eps_rho", s.eps_rho},
          {"delta_min", s.delta_min}, {"delta_max", s.delta_max},
          {"eps_x", s.eps_x},         {"max_outer_iterations", s.max_outer_iterations},
          {"w_delta", s.w_delta},     {"penalty_order", s.penalty_order},
          {"horizontal_trust_region", s.horizontal_trust_region}};
}

Json to_json(const SolverSettings& s) {
  return {{"max_iterations", s.max_iterations}, {"eps_primal", s.eps_primal},
          {"eps_dual", s.eps_dual},             {"alpha", s.alpha},
          {"scaling", s.scaling},               {"rho", s.rho},
          {"sigma", s.sigma},                   {"check_interval", s.check_interval},
          {"eps_infeasible", s.eps_infeasible}};
}

Json to_json(const FovParams& f) { return {{"half_angle", f.half_angle}, {"cell_area", f.cell_area}}; }

CityParams city_params_from_json(const Json& doc) {
  CityParams p;
  StrictObject r(doc, "city");
  r.read("grid_size", p.grid_size);
  r.read("building_density", p.building_density);
  r.read("height_min", p.height_min);
  r.read("height_max", p.height_max);
  r.read("smoothing_radius", p.smoothing_radius);
  r.read("seed", p.seed);
  r.finish();
  return p;
}

ScenarioParams scenario_params_from_json(const Json& doc) {
  ScenarioParams p;
  StrictObject r(doc, "scenario");
  r.read("n_drones", p.n_drones);
  r.read("n_waypoints", p.n_waypoints);
  r.read("d_safe", p.d_safe);
  r.read("d_drone", p.d_drone);
  r.read("d_dev", p.d_dev);
  r.read("z_min", p.z_min);
  r.read("z_max", p.z_max);
  r.read("seed", p.seed);
  std::string model = to_string(p.obstacle_model);
  r.read("obstacle_model", model);
  try {
    p.obstacle_model = obstacle_model_from_string(model);
  } catch (const DomainError& e) {
    throw FormatError(std::string("scenario.obstacle_model: ") + e.what());
  }
  if (const Json* env = r.find("envelope")) {
    StrictObject e(*env, "scenario.envelope");
    e.read("skirt", p.envelope.skirt);
    e.read("slope", p.envelope.slope);
    e.finish();
  }
  r.finish();
  return p;
}

PlannerSettings planner_settings_from_json(const Json& doc) {
  PlannerSettings s;
  StrictObject r(doc, "planner");
  r.read("delta0", s.delta0);
  r.read("c1", s.c1);
  r.read("c2", s.c2);
  r.read("eps_rho", s.eps_rho);
  r.read("delta_min", s.delta_min);
  r.read("delta_max", s.delta_max);
  r.read("eps_x", s.eps_x);
  r.read("max_outer_iterations", s.max_outer_iterations);
  r.read("w_delta", s.w_delta);
  r.read("penalty_order", s.penalty_order);
  r.read("horizontal_trust_region", s.horizontal_trust_region);
  r.finish();
  return s;
}

SolverSettings solver_settings_from_json(const Json& doc) {
  SolverSettings s;
  StrictObject r(doc, "solver");
  r.read("max_iterations", s.max_iterations);
  r.read("eps_primal", s.eps_primal);
  r.read("eps_dual", s.eps_dual);
  r.read("alpha", s.alpha);
  r.read("scaling", s.scaling);
  r.read("rho", s.rho);
  r.read("sigma", s.sigma);
  r.read("check_interval", s.check_interval);
  r.read("eps_infeasible", s.eps_infeasible);
  r.finish();
  return s;
}

FovParams fov_from_json(const Json& doc) {
  FovParams f;
  StrictObject r(doc, "fov");
  r.read("half_angle", f.half_angle);
  r.read("cell_area", f.cell_area);
  r.finish();
  return f;
}

Json city_to_json(const CityModel& city) {
  Json buildings = Json::array();
  for (const auto& b : city.buildings()) {
    buildings.push_back({{"x0", b.x0}, {"y0", b.y0}, {"width", b.width}, {"length", b.length}, {"height", b.height}});
  }
  return {{"grid_size", city.grid_size()},
          {"cell_pitch_m", 1.0},
          {"raw_heights", city.raw_heights()},
          {"seed", city.params().seed},
          {"params", to_json(city.params())},
          {"buildings", buildings}};
}

CityModel city_from_json(const Json& doc) {
  try {
    if (!doc.is_object()) throw FormatError("city: expected a JSON object");
    CityParams params = city_params_from_json(member(doc, "params", "city"));
    const int s = member(doc, "grid_size", "city").get<int>();
    if (s != params.grid_size) throw FormatError("city: grid_size disagrees with params.grid_size");
    if (member(doc, "cell_pitch_m", "city").get<double>() != 1.0) throw FormatError("city: cell_pitch_m must be 1");
    params.seed = member(doc, "seed", "city").get<std::uint64_t>();
    auto raw = member(doc, "raw_heights", "city").get<std::vector<double>>();
    if (raw.size() != static_cast<std::size_t>(s) * s) throw FormatError("city: raw_heights must hold S*S values");
    std::vector<Building> buildings;
    if (const auto it = doc.find("buildings"); it != doc.end()) {
      for (const auto& b : *it) {
        buildings.push_back({b.at("x0").get<int>(), b.at("y0").get<int>(), b.at("width").get<int>(),
                             b.at("length").get<int>(), b.at("height").get<double>()});
      }
    }
    return CityModel(params, std::move(raw), std::move(buildings));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("city: ") + e.what());
  }
}

Json conic_to_json(const ConicProgram& program) {
  Json cones = Json::array();
  for (const auto& c : program.cones) cones.push_back({{"kind", to_string(c.kind)}, {"dim", c.dim}});
  return {{"format", "conic_program/1"},
          {"n_variables", program.n_variables},
          {"layout", {{"n_drones", program.layout.n_drones}, {"n_waypoints", program.layout.n_waypoints}}},
          {"P", sparse_to_json(program.P)},
          {"q", vector_to_json(program.q)},
          {"objective_offset", program.objective_offset},
          {"A", sparse_to_json(program.A)},
          {"b", vector_to_json(program.b)},
          {"cones", cones}};
}

ConicProgram conic_from_json(const Json& doc) {
  try {
    if (member(doc, "format", "conic").get<std::string>() != "conic_program/1") {
      throw FormatError("conic: unsupported format tag");
    }
    ConicProgram program;
    program.n_variables = member(doc, "n_variables", "conic").get<int>();
    const Json& layout = member(doc, "layout", "conic");
    program.layout = {layout.at("n_drones").get<int>(), layout.at("n_waypoints").get<int>()};
    program.P = sparse_from_json(member(doc, "P", "conic"), "conic.P");
    program.q = vector_from_json(member(doc, "q", "conic"));
    program.objective_offset = member(doc, "objective_offset", "conic").get<double>();
    program.A = sparse_from_json(member(doc, "A", "conic"), "conic.A");
    program.b = vector_from_json(member(doc, "b", "conic"));
    for (const auto& c : member(doc, "cones", "conic")) {
      program.cones.push_back({cone_kind_from_string(c.at("kind").get<std::string>()), c.at("dim").get<int>()});
    }
    program.validate();
    return program;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("conic: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("conic: ") + e.what());
  }
}

Json trajectories_to_json(const Trajectories& trajs) {
  Json waypoints = Json::array();
  for (int k = 0; k < trajs.n_drones(); ++k) {
    for (int t = 0; t < trajs.n_waypoints(); ++t) {
      const Point3& p = trajs.at(k, t);
      waypoints.push_back({{"drone", k}, {"t", t}, {"x", p.x()}, {"y", p.y()}, {"z", p.z()}});
    }
  }
  return {{"n_drones", trajs.n_drones()}, {"n_waypoints", trajs.n_waypoints()}, {"waypoints", waypoints}};
}

Trajectories trajectories_from_json(const Json& doc) {
  try {
    const Json& body = doc.contains("trajectories") ? doc.at("trajectories") : doc;
    Trajectories out(body.at("n_drones").get<int>(), body.at("n_waypoints").get<int>());
    const Json& w = body.at("waypoints");
    if (w.size() != static_cast<std::size_t>(out.n_drones()) * out.n_waypoints()) {
      throw FormatError("trajectories: waypoint count does not match n_drones * n_waypoints");
    }
    for (const auto& p : w) {
      out.at(p.at("drone").get<int>(), p.at("t").get<int>()) =
          Point3(p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>());
    }
    return out;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("trajectories: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("trajectories: ") + e.what());
  }
}

Json trace_to_json(const std::vector<IterationRecord>& trace, bool include_timing) {
  Json out = Json::array();
  for (const auto& r : trace) {
    Json rec = {{"iteration", r.iteration},
                {"delta", finite_or_null(r.delta)},
                {"violation", r.violation},
                {"objective", r.objective},
                {"j_smooth", r.j_smooth},
                {"j_length", r.j_length},
                {"delta_used", r.delta_used},
                {"retained_rows", r.retained_rows},
                {"dropped_obstacle", r.dropped_obstacle},
                {"dropped_interdrone", r.dropped_interdrone},
                {"total_rows", r.total_rows},
                {"collision_rows_total", r.collision_rows_total},
                {"collision_rows_retained", r.collision_rows_retained},
                {"max_dropped_violation", r.max_dropped_violation},
                {"solver_iterations", r.solver_iterations},
                {"solver_status", to_string(r.solver_status)},
                {"step", r.step}};
    if (include_timing) rec["solve_time_s"] = r.solve_time;
    out.push_back(std::move(rec));
  }
  return out;
}

Json plan_result_to_json(const PlanResult& result, bool include_timing) {
  Json doc = {{"variant", to_string(result.variant)},
              {"status", to_string(result.status)},
              {"outer_iterations", result.trace.size()},
              {"trajectories", trajectories_to_json(result.trajectories)},
              {"trace", trace_to_json(result.trace, include_timing)}};
  if (include_timing) doc["wall_time_s"] = result.wall_time;
  return doc;
}

Json metrics_to_json(const MetricsReport& report, bool include_timing) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row = {{"variant", r.variant},
                {"status", r.status},
                {"total_path_length", r.total_path_length},
                {"total_smoothness", r.total_smoothness},
                {"coverage_area", r.coverage_area},
                {"min_interdrone_distance", finite_or_null(r.min_interdrone_distance)},
                {"max_violation", r.max_violation},
                {"outer_iterations", r.outer_iterations}};
    if (include_timing) row["calculation_time"] = r.calculation_time;
    rows.push_back(std::move(row));
  }
  return {{"grid_size", report.grid_size},         {"n_drones", report.n_drones},
          {"n_waypoints", report.n_waypoints},     {"city_seed", report.city_seed},
          {"scenario_seed", report.scenario_seed}, {"half_angle", report.half_angle},
          {"variants", rows}};
}

std::string trajectories_csv(const Trajectories& trajs) {
  std::ostringstream out;
  out.precision(17);
  out << "drone,t,x_m,y_m,z_m\n";
  for (int k = 0; k < trajs.n_drones(); ++k) {
    for (int t = 0; t < trajs.n_waypoints(); ++t) {
      const Point3& p = trajs.at(k, t);
      out << k << ',' << t << ',' << p.x() << ',' << p.y() << ',' << p.z() << '\n';
    }
  }
  return out.str();
}

std::string preset_csv(const PresetPath& preset) {
  std::ostringstream out;
  out.precision(17);
  out << "drone,t,x,y\n";
  for (int k = 0; k < preset.n_drones(); ++k) {
    for (int t = 0; t < preset.n_waypoints(); ++t) {
      out << k << ',' << t << ',' << preset.at(k, t).x() << ',' << preset.at(k, t).y() << '\n';
    }
  }
  return out.str();
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace trsco
