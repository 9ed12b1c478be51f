#include "trsco/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace trsco {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  city.validate();
  scenario.validate();
  planner.validate();
  solver.validate();
  fov.validate();
  if (variants.empty()) throw DomainError("RunConfig: at least one variant is required");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    for (std::size_t j = i + 1; j < variants.size(); ++j) {
      if (variants[i] == variants[j]) throw DomainError(std::string("RunConfig: duplicate variant ") + to_string(variants[i]));
    }
  }
  if (output_dir.empty()) throw DomainError("RunConfig: output_dir must not be empty");
}

Json to_json(const RunConfig& c) {
  Json variants = Json::array();
  for (Variant v : c.variants) variants.push_back(to_string(v));
  return {{"city", to_json(c.city)},       {"scenario", to_json(c.scenario)},
          {"planner", to_json(c.planner)}, {"solver", to_json(c.solver)},
          {"fov", to_json(c.fov)},         {"variants", variants},
          {"output_dir", c.output_dir},    {"emit_svg", c.emit_svg}};
}

RunConfig run_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("config: expected a JSON object");
  RunConfig c;
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const Json& v = item.value();
    if (key == "city") {
      c.city = city_params_from_json(v);
    } else if (key == "scenario") {
      c.scenario = scenario_params_from_json(v);
    } else if (key == "planner") {
      c.planner = planner_settings_from_json(v);
    } else if (key == "solver") {
      c.solver = solver_settings_from_json(v);
    } else if (key == "fov") {
      c.fov = fov_from_json(v);
    } else if (key == "variants") {
      if (!v.is_array()) throw FormatError("config.variants: expected an array of names");
      c.variants.clear();
      for (const auto& name : v) {
        if (!name.is_string()) throw FormatError("config.variants: expected an array of names");
        try {
          c.variants.push_back(variant_from_string(name.get<std::string>()));
        } catch (const DomainError& e) {
          throw FormatError(std::string("config.variants: ") + e.what());
        }
      }
    } else if (key == "output_dir") {
      if (!v.is_string()) throw FormatError("config.output_dir: expected a string");
      c.output_dir = v.get<std::string>();
    } else if (key == "emit_svg") {
      if (!v.is_boolean()) throw FormatError("config.emit_svg: expected a boolean");
      c.emit_svg = v.get<bool>();
    } else {
      throw FormatError("config: unknown field '" + key + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(doc);
}

int planner_threads_from_env(int n_variants) {
  const char* raw = std::getenv("PLANNER_THREADS");
  if (!raw || !*raw) return std::max(1, n_variants);
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 1 || value > 1024) {
    throw DomainError(std::string("PLANNER_THREADS must be a positive integer, got '") + raw + "'");
  }
  return static_cast<int>(value);
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

struct VariantOutcome {
  std::optional<PlanResult> result;  // final or partial iterate
  bool aborted = false;
  std::string error;
};

Json trajectories_document(const PlanResult& r, const char* status) {
  return {{"variant", to_string(r.variant)},
          {"status", status},
          {"outer_iterations", r.trace.size()},
          {"trajectories", trajectories_to_json(r.trajectories)}};
}

}  // namespace

int run(const RunConfig& config, std::ostream& log, int max_threads) {
  try {
    config.validate();
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  Scenario scenario;
  try {
    CityModel city = generate_city(config.city);
    scenario = make_scenario(std::move(city), config.scenario);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  const ValidationReport check = validate_scenario(scenario);
  for (const auto& issue : check.issues) {
    log << (issue.severity == IssueSeverity::error ? "scenario error: " : "scenario warning: ") << issue.message;
    if (issue.drone >= 0) log << " (drone " << issue.drone << ", waypoint " << issue.waypoint << ")";
    log << "\n";
  }
  if (check.has_errors()) return exit_config_error;

  const fs::path dir(config.output_dir);
  try {
    fs::create_directories(dir);
    fs::remove(dir / "FAILED");
  } catch (const fs::filesystem_error& e) {
    log << "io error: " << e.what() << "\n";
    return exit_io_error;
  }

  const int n = static_cast<int>(config.variants.size());
  std::vector<VariantOutcome> outcomes(n);
  std::mutex write_mutex;
  std::vector<std::string> io_errors;
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      const Variant variant = config.variants[i];
      VariantOutcome outcome;
      try {
        outcome.result = plan(scenario, config.planner, variant, config.solver);
      } catch (const PlanningError& e) {
        outcome.result = e.partial();
        outcome.result->variant = variant;
        outcome.aborted = true;
        outcome.error = e.what();
      } catch (const std::exception& e) {
        outcome.aborted = true;
        outcome.error = e.what();
      }
      // Files of one variant are written together, one variant at a time.
      std::lock_guard<std::mutex> lock(write_mutex);
      const std::string name = to_string(variant);
      try {
        if (outcome.result) {
          const PlanResult& r = *outcome.result;
          const char* status = outcome.aborted ? "aborted" : to_string(r.status);
          write_file(dir / ("trajectories_" + name + ".json"), dump(trajectories_document(r, status)));
          write_file(dir / ("trajectories_" + name + ".csv"), trajectories_csv(r.trajectories));
          write_file(dir / ("trace_" + name + ".json"), dump(trace_to_json(r.trace)));
          if (config.emit_svg) {
            write_file(dir / ("scene_" + name + ".svg"), render_svg(scenario.city, r.trajectories, config.fov));
          }
        }
      } catch (const IoError& e) {
        io_errors.push_back(e.what());
      }
      if (outcome.aborted) {
        log << name << ": aborted: " << outcome.error << "\n";
      } else {
        const PlanResult& r = *outcome.result;
        log << name << ": " << to_string(r.status) << " after " << r.trace.size() << " iterations\n";
      }
      outcomes[i] = std::move(outcome);
    }
  };

  const int threads = std::clamp(max_threads, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<PlanResult> finished;
  std::vector<const VariantOutcome*> with_result;
  for (const auto& o : outcomes) {
    if (o.result) {
      finished.push_back(*o.result);
      with_result.push_back(&o);
    }
  }
  try {
    write_file(dir / "city.json", dump(city_to_json(scenario.city)));
    if (!finished.empty()) {
      MetricsReport rep = report(finished, scenario, config.fov);
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (with_result[i]->aborted) rep.rows[i].status = "aborted";
      }
      write_file(dir / "metrics.json", dump(metrics_to_json(rep)));
      write_file(dir / "metrics.txt", rep.table());
      log << rep.table();
    }
  } catch (const IoError& e) {
    io_errors.push_back(e.what());
  }

  bool aborted = false;
  bool all_converged = true;
  std::ostringstream failed;
  for (int i = 0; i < n; ++i) {
    const auto& o = outcomes[i];
    if (o.aborted) {
      aborted = true;
      failed << to_string(config.variants[i]) << ": " << o.error << "\n";
    } else if (o.result->status != PlanStatus::converged) {
      all_converged = false;
    }
  }
  for (const auto& e : io_errors) {
    log << "io error: " << e << "\n";
    failed << "io error: " << e << "\n";
  }
  if (aborted || !io_errors.empty()) {
    try {
      write_file(dir / "FAILED", failed.str());
    } catch (const IoError& e) {
      log << "io error: " << e.what() << "\n";
      return exit_io_error;
    }
  }
  if (!io_errors.empty()) return exit_io_error;
  if (aborted) return exit_planning_abort;
  return all_converged ? exit_converged : exit_not_converged;
}

}  // namespace trsco
