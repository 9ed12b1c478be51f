// JSON-in, JSON-out bindings; the Python package converts documents to and from dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "trsco/cli.hpp"

namespace py = pybind11;
using namespace trsco;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

Scenario scenario_from(const RunConfig& config) {
  return make_scenario(generate_city(config.city), config.scenario);
}

std::string plan_json(const std::string& config_text, const std::string& variant) {
  const RunConfig config = run_config_from_json(parse(config_text));
  config.validate();
  const Variant v = variant_from_string(variant);
  py::gil_scoped_release release;
  const Scenario sc = scenario_from(config);
  const PlanResult r = plan(sc, config.planner, v, config.solver);
  Json doc = plan_result_to_json(r);
  doc["violation"] = violation(sc, r.trajectories);
  doc["metrics"] = metrics_to_json(report({r}, sc, config.fov));
  return dump(doc);
}

std::string solve_json(const std::string& program_text, const std::string& settings_text) {
  const ConicProgram program = conic_from_json(parse(program_text));
  const SolverSettings settings = solver_settings_from_json(parse(settings_text));
  const Solution s = solve_conic(program, settings);
  Json doc;
  doc["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
  doc["objective"] = s.objective;
  doc["status"] = to_string(s.status);
  doc["iterations"] = s.iterations;
  doc["primal_residual"] = s.primal_residual;
  doc["dual_residual"] = s.dual_residual;
  return dump(doc);
}

}  // namespace

PYBIND11_MODULE(_trsco, m) {
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<PlanningError>(m, "PlanningError", PyExc_RuntimeError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<AllocationError>(m, "AllocationError", PyExc_RuntimeError);

  m.def("generate_city", [](const std::string& params) {
    return dump(city_to_json(generate_city(city_params_from_json(parse(params)))));
  });
  m.def("make_scenario", [](const std::string& config) {
    const Scenario sc = scenario_from(run_config_from_json(parse(config)));
    Json doc;
    doc["preset"] = preset_csv(sc.preset);
    doc["reference"] = trajectories_to_json(init_reference(sc));
    return dump(doc);
  });
  m.def("plan", &plan_json, py::arg("config"), py::arg("variant") = "enhanced");
  m.def("run", [](const std::string& config, int max_threads) {
    const RunConfig c = run_config_from_json(parse(config));
    std::ostringstream log;
    int code;
    {
      py::gil_scoped_release release;
      code = run(c, log, max_threads);
    }
    return py::make_tuple(code, log.str());
  }, py::arg("config"), py::arg("max_threads") = 1);
  m.def("solve_conic", &solve_json);
  m.def("update_radius", [](double delta, double ell, const std::string& settings) {
    return update_radius(delta, ell, planner_settings_from_json(parse(settings)));
  });
  m.def("path_length", [](const std::string& t) { return path_length(trajectories_from_json(parse(t))); });
  m.def("smoothness", [](const std::string& t) { return smoothness(trajectories_from_json(parse(t))); });
  m.def("coverage_area", [](const std::string& t, const std::string& city, const std::string& fov) {
    return coverage_area(trajectories_from_json(parse(t)), city_from_json(parse(city)), fov_from_json(parse(fov)));
  });
  m.def("render_svg", [](const std::string& city, const std::string& t, const std::string& fov) {
    return render_svg(city_from_json(parse(city)), trajectories_from_json(parse(t)), fov_from_json(parse(fov)));
  });
}
