#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mipt/fock.hpp"

namespace mipt {

enum class RunMode {
  single_complete,     // complete-basis single-copy equation
  single_postselected, // nonlinear post-selected single-copy equation
  doubled,             // EPR-paired doubled equation, swap entropy
  trajectories,        // stochastic unraveling of the doubled equation
};

enum class ReportKind { series, saturation };

/// How subsystem sizes are chosen: an explicit list, half the chain, or a
/// quarter of the chain clamped to at least one site.
enum class SubsystemRule { explicit_list, half, quarter };

/// Fully-resolved run description. Parsed from `key = value` text (one pair
/// per line, full-line # comments, unknown keys rejected) and serialized
/// back in a canonical order so emitted echoes re-parse to the same value.
struct RunConfig {
  RunMode mode = RunMode::doubled;
  int n_sites = 6;
  int n_bosons = 3;
  double j = 1.0;
  double u = 1.0;
  Boundary boundary = Boundary::open;
  std::vector<double> gammas = {1.0};
  std::string initial_state = "auto";  // "auto" = 0...01...1
  SubsystemRule subsystem_rule = SubsystemRule::half;
  std::vector<int> subsystems;  // used when rule == explicit_list
  double t_total = 30.0;
  int n_steps = 11000;
  int check_every = 50;
  int retained_channels = 0;  // 0 = all channels / pairs
  int n_trajectories = 100;
  std::uint64_t seed = 12345;
  int record_every = 50;
  std::vector<int> sweep_sites;  // trajectories: sweep the chain length
  ReportKind report = ReportKind::series;
  std::string output_path = "out.csv";

  bool operator==(const RunConfig&) const = default;
};

/// Parses and cross-validates a config. Throws ConfigError carrying the
/// offending line for per-line problems.
RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Cross-field validation only (no allocation of simulation objects).
void validate_config(const RunConfig& cfg);

/// Occupation pattern for a chain of n_sites sites under this config
/// ("auto" fills the rightmost sites).
std::string resolve_initial_state(const RunConfig& cfg, int n_sites);

/// Subsystem sizes for a chain of n_sites sites under this config.
std::vector<int> resolve_subsystems(const RunConfig& cfg, int n_sites);

/// Named experiment presets (fig2, fig3, figS1, figS3, figS5, figS6).
/// output_path is set to "<name>.csv".
RunConfig preset(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace mipt
