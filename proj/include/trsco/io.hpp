#pragma once

#include <string>

#include <json.hpp>

#include "trsco/conic.hpp"
#include "trsco/env.hpp"
#include "trsco/metrics.hpp"
#include "trsco/planner.hpp"
#include "trsco/scenario.hpp"

namespace trsco {

using Json = nlohmann::json;

/// Malformed or inconsistent document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const CityParams& params);
Json to_json(const ScenarioParams& params);
Json to_json(const PlannerSettings& settings);
Json to_json(const SolverSettings& settings);
Json to_json(const FovParams& fov);

// Strict readers: unknown keys and wrongly typed values raise FormatError; missing keys keep
// their defaults. Invariants are not checked here.
CityParams city_params_from_json(const Json& doc);
ScenarioParams scenario_params_from_json(const Json& doc);
PlannerSettings planner_settings_from_json(const Json& doc);
SolverSettings solver_settings_from_json(const Json& doc);
FovParams fov_from_json(const Json& doc);

/// {grid_size, cell_pitch_m, raw_heights (flat, index i*S+j), seed, params, buildings}.
Json city_to_json(const CityModel& city);
/// Rebuilds the model; the smoothed field is recomputed from the raw raster.
CityModel city_from_json(const Json& doc);

/// {format, n_variables, layout, P, q, objective_offset, A, b, cones}; sparse matrices as
/// {rows, cols, triplets: [[i, j, v], ...]} in column-major order.
Json conic_to_json(const ConicProgram& program);
ConicProgram conic_from_json(const Json& doc);

Json trajectories_to_json(const Trajectories& trajs);
Trajectories trajectories_from_json(const Json& doc);

/// Trace entries; an infinite radius is written as null.
Json trace_to_json(const std::vector<IterationRecord>& trace, bool include_timing = true);

/// Full result document. Timings are omitted when include_timing is false so that
/// repeated runs can be compared byte for byte.
Json plan_result_to_json(const PlanResult& result, bool include_timing = true);

Json metrics_to_json(const MetricsReport& report, bool include_timing = true);

/// Header "drone,t,x_m,y_m,z_m", rows sorted by (drone, t).
std::string trajectories_csv(const Trajectories& trajs);
/// Header "drone,t,x,y".
std::string preset_csv(const PresetPath& preset);

/// Canonical text form of a JSON document (sorted keys, two-space indent, trailing newline).
std::string dump(const Json& doc);

}  // namespace trsco
