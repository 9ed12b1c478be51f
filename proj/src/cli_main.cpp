#include <CLI11.hpp>

#include "trsco/cli.hpp"

namespace trsco {

int plan_main(const std::vector<std::string>& args, std::ostream& log) {
  CLI::App app{"Multi-drone trajectory planner"};
  app.name("plan");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::vector<std::string> variants;
  bool svg = false;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--seed", seed, "seed for both the city and the scenario");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--variant", variants, "enhanced | original_trsco | no_trust_region (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_flag("--svg", svg, "write scene_<variant>.svg");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    log << app.help();
    return exit_converged;
  } catch (const CLI::ParseError& e) {
    log << "usage error: " << e.what() << "\n" << app.help();
    return exit_config_error;
  }

  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const IoError& e) {
    log << "io error: " << e.what() << "\n";
    return exit_io_error;
  } catch (const FormatError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  if (seed) {
    config.city.seed = *seed;
    config.scenario.seed = *seed;
  }
  if (out_dir) config.output_dir = *out_dir;
  if (!variants.empty()) {
    config.variants.clear();
    try {
      for (const auto& v : variants) config.variants.push_back(variant_from_string(v));
    } catch (const DomainError& e) {
      log << "config error: " << e.what() << "\n";
      return exit_config_error;
    }
  }
  if (svg) config.emit_svg = true;

  int threads = 1;
  try {
    threads = planner_threads_from_env(static_cast<int>(config.variants.size()));
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  return run(config, log, threads);
}

}  // namespace trsco
