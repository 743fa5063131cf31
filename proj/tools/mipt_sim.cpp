// mipt-sim: measurement-induced phase transition simulator.
//
// Evolves hard-core Bose-Hubbard density matrices under generalized
// (post-selected) Lindblad dynamics, on one copy or on the doubled space
// with EPR-paired jumps, plus the stochastic trajectory unraveling, and
// writes entropy time series / saturation sweeps as CSV.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mipt/errors.hpp"
#include "mipt/runner.hpp"
#include "mipt/version.hpp"

namespace {

// 0 success, 2 config error, 3 invariant violation, 4 numerical failure
int execute(const mipt::RunConfig& cfg, int threads) {
  try {
    const auto outcome = mipt::run(cfg, threads);
    std::cout << outcome.csv_path << ": " << outcome.data_rows << " rows\n";
    return 0;
  } catch (const mipt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mipt::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const mipt::DenominatorVanished& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const mipt::NonPositiveSwapTrace& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const mipt::NonPositivePurity& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const mipt::ZeroNormAfterJump& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const mipt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measurement-induced phase transition simulator"};
  app.set_version_flag("--version", std::string("mipt-sim ") + mipt::kVersion);
  app.require_subcommand(1);

  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--threads", threads, "worker threads for sweep points")
      ->check(CLI::PositiveNumber);
  app.add_option_function<std::uint64_t>(
         "--seed",
         [&](std::uint64_t v) {
           seed = v;
           seed_given = true;
         },
         "override the config seed");

  std::string config_path;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "execute a config file");
  run_cmd->fallthrough();
  run_cmd->add_option("--config", config_path, "key = value config file")
      ->required();
  run_cmd->add_option("--out", run_out, "override output_path");

  std::string preset_name;
  std::string preset_dir = ".";
  auto* preset_cmd =
      app.add_subcommand("preset", "run a bundled experiment preset");
  preset_cmd->fallthrough();
  preset_cmd->add_option("name", preset_name, "fig2|fig3|figS1|figS3|figS5|figS6")
      ->required();
  preset_cmd->add_option("--out", preset_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a config error
  }

  try {
    mipt::RunConfig cfg;
    if (run_cmd->parsed()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw mipt::ConfigError("cannot read config " + config_path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      cfg = mipt::parse_config(buffer.str());
      if (!run_out.empty()) cfg.output_path = run_out;
    } else {
      cfg = mipt::preset(preset_name);
      cfg.output_path =
          (std::filesystem::path(preset_dir) / cfg.output_path).string();
    }
    if (seed_given) cfg.seed = seed;
    return execute(cfg, threads);
  } catch (const mipt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
