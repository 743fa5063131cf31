#include "mipt/runconfig.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "mipt/errors.hpp"

namespace mipt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

long parse_int(std::string_view v, long line) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + std::string(v) + "'",
                      line);
  return out;
}

std::uint64_t parse_u64(std::string_view v, long line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected an unsigned integer, got '" + std::string(v) +
                          "'",
                      line);
  return out;
}

double parse_double(std::string_view v, long line) {
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ConfigError("expected a number, got '" + s + "'", line);
  return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> parts;
  size_t pos = 0;
  while (pos <= v.size()) {
    const size_t comma = v.find(',', pos);
    const size_t end = comma == std::string_view::npos ? v.size() : comma;
    parts.push_back(trim(v.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return parts;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::single_complete: return "single-complete";
    case RunMode::single_postselected: return "single-postselected";
    case RunMode::doubled: return "doubled";
    case RunMode::trajectories: return "trajectories";
  }
  return "?";
}

void apply_key(RunConfig& cfg, std::string_view key, std::string_view value,
               long line) {
  if (key == "mode") {
    if (value == "single-complete") cfg.mode = RunMode::single_complete;
    else if (value == "single-postselected")
      cfg.mode = RunMode::single_postselected;
    else if (value == "doubled") cfg.mode = RunMode::doubled;
    else if (value == "trajectories") cfg.mode = RunMode::trajectories;
    else throw ConfigError("unknown mode '" + std::string(value) + "'", line);
  } else if (key == "n_sites") {
    cfg.n_sites = static_cast<int>(parse_int(value, line));
  } else if (key == "n_bosons") {
    cfg.n_bosons = static_cast<int>(parse_int(value, line));
  } else if (key == "j") {
    cfg.j = parse_double(value, line);
  } else if (key == "u") {
    cfg.u = parse_double(value, line);
  } else if (key == "boundary") {
    if (value == "open") cfg.boundary = Boundary::open;
    else if (value == "periodic") cfg.boundary = Boundary::periodic;
    else
      throw ConfigError("boundary must be open or periodic, got '" +
                            std::string(value) + "'",
                        line);
  } else if (key == "gamma") {
    cfg.gammas.clear();
    for (auto part : split_list(value))
      cfg.gammas.push_back(parse_double(part, line));
  } else if (key == "initial_state") {
    cfg.initial_state = std::string(value);
  } else if (key == "subsystem") {
    if (value == "half") {
      cfg.subsystem_rule = SubsystemRule::half;
      cfg.subsystems.clear();
    } else if (value == "quarter") {
      cfg.subsystem_rule = SubsystemRule::quarter;
      cfg.subsystems.clear();
    } else {
      cfg.subsystem_rule = SubsystemRule::explicit_list;
      cfg.subsystems.clear();
      for (auto part : split_list(value))
        cfg.subsystems.push_back(static_cast<int>(parse_int(part, line)));
    }
  } else if (key == "t_total") {
    cfg.t_total = parse_double(value, line);
  } else if (key == "n_steps") {
    cfg.n_steps = static_cast<int>(parse_int(value, line));
  } else if (key == "check_every") {
    cfg.check_every = static_cast<int>(parse_int(value, line));
  } else if (key == "retained_channels") {
    cfg.retained_channels = static_cast<int>(parse_int(value, line));
  } else if (key == "n_trajectories") {
    cfg.n_trajectories = static_cast<int>(parse_int(value, line));
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, line);
  } else if (key == "record_every") {
    cfg.record_every = static_cast<int>(parse_int(value, line));
  } else if (key == "sweep_sites") {
    cfg.sweep_sites.clear();
    for (auto part : split_list(value))
      cfg.sweep_sites.push_back(static_cast<int>(parse_int(part, line)));
  } else if (key == "report") {
    if (value == "series") cfg.report = ReportKind::series;
    else if (value == "saturation") cfg.report = ReportKind::saturation;
    else
      throw ConfigError("report must be series or saturation, got '" +
                            std::string(value) + "'",
                        line);
  } else if (key == "output_path") {
    cfg.output_path = std::string(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'", line);
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  long line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view raw = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    const std::string_view stripped = trim(raw);
    if (nl == std::string_view::npos && stripped.empty()) break;
    if (stripped.empty() || stripped.front() == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value'", line_no);
    const std::string_view key = trim(stripped.substr(0, eq));
    const std::string_view value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (!seen.insert(std::string(key)).second)
      throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
    apply_key(cfg, key, value, line_no);
    if (nl == std::string_view::npos) break;
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  out += "mode = " + mode_name(cfg.mode) + "\n";
  out += "n_sites = " + std::to_string(cfg.n_sites) + "\n";
  out += "n_bosons = " + std::to_string(cfg.n_bosons) + "\n";
  out += "j = " + fmt_double(cfg.j) + "\n";
  out += "u = " + fmt_double(cfg.u) + "\n";
  out += std::string("boundary = ") +
         (cfg.boundary == Boundary::open ? "open" : "periodic") + "\n";
  out += "gamma = " + join_doubles(cfg.gammas) + "\n";
  out += "initial_state = " + cfg.initial_state + "\n";
  switch (cfg.subsystem_rule) {
    case SubsystemRule::half: out += "subsystem = half\n"; break;
    case SubsystemRule::quarter: out += "subsystem = quarter\n"; break;
    case SubsystemRule::explicit_list:
      out += "subsystem = " + join_ints(cfg.subsystems) + "\n";
      break;
  }
  out += "t_total = " + fmt_double(cfg.t_total) + "\n";
  out += "n_steps = " + std::to_string(cfg.n_steps) + "\n";
  out += "check_every = " + std::to_string(cfg.check_every) + "\n";
  out += "retained_channels = " + std::to_string(cfg.retained_channels) + "\n";
  out += "n_trajectories = " + std::to_string(cfg.n_trajectories) + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "record_every = " + std::to_string(cfg.record_every) + "\n";
  if (!cfg.sweep_sites.empty())
    out += "sweep_sites = " + join_ints(cfg.sweep_sites) + "\n";
  out += std::string("report = ") +
         (cfg.report == ReportKind::series ? "series" : "saturation") + "\n";
  out += "output_path = " + cfg.output_path + "\n";
  return out;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.n_sites < 1 || cfg.n_sites > 20)
    throw ConfigError("n_sites must be in [1, 20]");
  if (cfg.n_bosons < 0 || cfg.n_bosons > cfg.n_sites)
    throw ConfigError("n_bosons must be in [0, n_sites]");
  if (cfg.gammas.empty()) throw ConfigError("gamma list is empty");
  for (double g : cfg.gammas)
    if (g < 0.0) throw ConfigError("gamma must be nonnegative");
  if (cfg.t_total <= 0.0) throw ConfigError("t_total must be positive");
  if (cfg.n_steps < 1) throw ConfigError("n_steps must be >= 1");
  if (cfg.check_every < 0) throw ConfigError("check_every must be >= 0");
  if (cfg.record_every < 0) throw ConfigError("record_every must be >= 0");
  if (cfg.retained_channels < 0 ||
      cfg.retained_channels > 2 * cfg.n_sites)
    throw ConfigError("retained_channels must be in [0, 2*n_sites]");
  if (cfg.n_trajectories < 1)
    throw ConfigError("n_trajectories must be >= 1");
  if (cfg.output_path.empty()) throw ConfigError("output_path is empty");

  if (!cfg.sweep_sites.empty()) {
    if (cfg.mode != RunMode::trajectories)
      throw ConfigError("sweep_sites is only available in trajectories mode");
    if (cfg.initial_state != "auto")
      throw ConfigError(
          "sweep_sites requires initial_state = auto (one pattern cannot fit "
          "several chain lengths)");
    if (cfg.subsystem_rule == SubsystemRule::explicit_list)
      throw ConfigError(
          "sweep_sites requires subsystem = half or quarter");
    for (int l : cfg.sweep_sites)
      if (l < 2 || l > 20 || l % 2 != 0)
        throw ConfigError("sweep_sites entries must be even and in [2, 20]");
  }

  const auto check_point = [&](int n_sites, int n_bosons) {
    if (cfg.initial_state != "auto") {
      if (static_cast<int>(cfg.initial_state.size()) != n_sites)
        throw ConfigError("initial_state length " +
                          std::to_string(cfg.initial_state.size()) +
                          " does not match n_sites = " +
                          std::to_string(n_sites));
      int weight = 0;
      for (char c : cfg.initial_state) {
        if (c != '0' && c != '1')
          throw ConfigError("initial_state may contain only '0' and '1'");
        weight += (c == '1');
      }
      if (weight != n_bosons)
        throw ConfigError("initial_state weight " + std::to_string(weight) +
                          " does not match n_bosons = " +
                          std::to_string(n_bosons));
    }
    if (cfg.subsystem_rule == SubsystemRule::explicit_list) {
      if (cfg.subsystems.empty()) throw ConfigError("subsystem list is empty");
      for (int la : cfg.subsystems)
        if (la <= 0 || la >= n_sites)
          throw ConfigError("subsystem size " + std::to_string(la) +
                            " must satisfy 0 < L_A < n_sites");
    } else if (n_sites < 2) {
      throw ConfigError("subsystem rules need n_sites >= 2");
    }
  };
  if (cfg.sweep_sites.empty()) {
    check_point(cfg.n_sites, cfg.n_bosons);
  } else {
    for (int l : cfg.sweep_sites) check_point(l, l / 2);
  }
}

std::string resolve_initial_state(const RunConfig& cfg, int n_sites) {
  if (cfg.initial_state != "auto") return cfg.initial_state;
  const int n_bosons = cfg.sweep_sites.empty() ? cfg.n_bosons : n_sites / 2;
  std::string s(static_cast<size_t>(n_sites), '0');
  for (int k = n_sites - n_bosons; k < n_sites; ++k)
    s[static_cast<size_t>(k)] = '1';
  return s;
}

std::vector<int> resolve_subsystems(const RunConfig& cfg, int n_sites) {
  switch (cfg.subsystem_rule) {
    case SubsystemRule::explicit_list: return cfg.subsystems;
    case SubsystemRule::half: return {std::max(1, n_sites / 2)};
    case SubsystemRule::quarter: return {std::max(1, n_sites / 4)};
  }
  return {};
}

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  if (name == "fig2") {
    cfg.mode = RunMode::doubled;
    cfg.gammas = {0.5, 1.0, 2.0, 5.0};
    cfg.subsystem_rule = SubsystemRule::explicit_list;
    cfg.subsystems = {3};
    cfg.report = ReportKind::series;
  } else if (name == "fig3") {
    cfg.mode = RunMode::doubled;
    cfg.gammas = {0.5, 1.0, 2.0, 5.0};
    cfg.subsystem_rule = SubsystemRule::explicit_list;
    cfg.subsystems = {1, 2, 3, 4, 5};
    cfg.report = ReportKind::saturation;
  } else if (name == "figS1") {
    cfg.mode = RunMode::trajectories;
    cfg.gammas = {0.5, 1.0, 3.0, 4.0};
    cfg.sweep_sites = {2, 4, 6};
    cfg.subsystem_rule = SubsystemRule::quarter;
    cfg.n_trajectories = 1000;
    cfg.report = ReportKind::saturation;
  } else if (name == "figS3") {
    cfg.mode = RunMode::trajectories;
    cfg.gammas = {0.5};
    cfg.subsystem_rule = SubsystemRule::explicit_list;
    cfg.subsystems = {3};
    cfg.n_trajectories = 1;
    cfg.report = ReportKind::series;
  } else if (name == "figS5") {
    cfg.mode = RunMode::single_postselected;
    cfg.gammas = {0.5, 1.0, 2.0, 5.0};
    cfg.subsystem_rule = SubsystemRule::explicit_list;
    cfg.subsystems = {3};
    cfg.report = ReportKind::series;
  } else if (name == "figS6") {
    cfg.mode = RunMode::single_postselected;
    cfg.gammas = {0.5, 1.0, 2.0, 5.0};
    cfg.subsystem_rule = SubsystemRule::explicit_list;
    cfg.subsystems = {1, 2, 3, 4, 5};
    cfg.report = ReportKind::saturation;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  cfg.output_path = std::string(name) + ".csv";
  validate_config(cfg);
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "figS1", "figS3", "figS5", "figS6"};
}

}  // namespace mipt
