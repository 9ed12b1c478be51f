#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trsco/conic.hpp"
#include "trsco/env.hpp"
#include "trsco/io.hpp"
#include "trsco/metrics.hpp"
#include "trsco/planner.hpp"
#include "trsco/scenario.hpp"

namespace trsco {

/// Process exit codes of a batch run.
enum ExitCode : int {
  exit_converged = 0,       // every variant converged
  exit_not_converged = 1,   // all variants finished, at least one hit max_outer_iterations
  exit_config_error = 2,
  exit_planning_abort = 3,
  exit_io_error = 4,
};

/// Unreadable input, unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  CityParams city;
  ScenarioParams scenario;
  PlannerSettings planner;
  SolverSettings solver;
  FovParams fov;
  std::vector<Variant> variants{Variant::enhanced};
  std::string output_dir = "out";
  bool emit_svg = false;

  /// Throws DomainError when a nested invariant fails or no variant is selected.
  void validate() const;
};

Json to_json(const RunConfig& config);
/// Strict reader; unknown fields, bad types and unknown variant names raise FormatError.
RunConfig run_config_from_json(const Json& doc);
/// Reads and parses a config file: IoError when unreadable, FormatError when malformed.
RunConfig load_run_config(const std::string& path);

/// Reads PLANNER_THREADS; unset means one thread per variant. DomainError when not a
/// positive integer.
int planner_threads_from_env(int n_variants);

/// Executes every variant and writes the output files into config.output_dir:
///   trajectories_<v>.json, trajectories_<v>.csv, trace_<v>.json, scene_<v>.svg (emit_svg),
///   metrics.json, metrics.txt, city.json, and FAILED when the run did not complete.
/// Progress and the metrics table go to `log`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log, int max_threads = 1);

/// Command line front end:
///   plan --config <file> [--seed <u64>] [--out <dir>] [--variant <name>]* [--svg]
/// --seed replaces both the city and the scenario seed; --variant replaces the configured
/// list. Usage errors map to exit_config_error; PLANNER_THREADS caps concurrent variants.
int plan_main(const std::vector<std::string>& args, std::ostream& log);

struct SvgOptions {
  double scale = 10.0;     // px per metre
  bool footprints = true;  // field-of-view disks at 10% opacity
};

/// Top-down scene: the arena border as a polygon, one gray rect per building (darker is
/// taller), one polyline per drone with circle markers at its waypoints.
std::string render_svg(const CityModel& city, const Trajectories& trajs, const FovParams& fov,
                       const SvgOptions& options = {});

/// Stroke colour of drone k: a fixed palette, then golden-angle hues.
std::string drone_color(int k);

}  // namespace trsco
