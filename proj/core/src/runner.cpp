#include "mipt/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "mipt/doubled.hpp"
#include "mipt/errors.hpp"
#include "mipt/trajectories.hpp"
#include "mipt/version.hpp"

namespace mipt {

namespace {

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Job {
  int n_sites;
  int n_bosons;
  double gamma;
};

std::vector<Job> sweep_jobs(const RunConfig& cfg) {
  std::vector<Job> jobs;
  if (cfg.sweep_sites.empty()) {
    for (double g : cfg.gammas) jobs.push_back({cfg.n_sites, cfg.n_bosons, g});
  } else {
    for (int l : cfg.sweep_sites)
      for (double g : cfg.gammas) jobs.push_back({l, l / 2, g});
  }
  return jobs;
}

std::vector<std::string> run_master_job(const RunConfig& cfg, const Job& job) {
  const FockBasis basis = build_basis(job.n_sites, job.n_bosons);
  const Matrix h = build_hamiltonian(
      basis, {.j_hop = cfg.j, .u_int = cfg.u, .boundary = cfg.boundary});
  const JumpOperatorSet jumps = build_jump_operators(basis);
  const Vector psi0 =
      parse_product_state(resolve_initial_state(cfg, job.n_sites), basis);
  const Matrix rho0 = psi0 * psi0.adjoint();

  EvolutionConfig evo;
  evo.t_total = cfg.t_total;
  evo.n_steps = cfg.n_steps;
  evo.measurement_rate = job.gamma;
  evo.check_every = cfg.check_every;
  evo.retained_channels = cfg.retained_channels;

  const auto masks_la = resolve_subsystems(cfg, job.n_sites);
  std::vector<std::string> rows;

  if (cfg.mode == RunMode::doubled) {
    std::vector<SubsystemMask> masks;
    for (int la : masks_la) masks.push_back({la});
    const auto result = evolve_doubled(h, jumps, basis, evo, rho0, masks);
    for (size_t k = 0; k < masks.size(); ++k) {
      if (cfg.report == ReportKind::series) {
        for (size_t i = 0; i < result.times.size(); ++i)
          rows.push_back(fmt(result.times[i]) + "," + fmt(job.gamma) + "," +
                         std::to_string(masks[k].prefix_len) + "," +
                         fmt(result.entropies[k][i]));
      } else {
        rows.push_back(std::to_string(masks[k].prefix_len) + "," +
                       fmt(job.gamma) + "," +
                       fmt(saturation_value(result.entropies[k])) + "," +
                       fmt(saturation_stderr(result.entropies[k])));
      }
    }
  } else {
    evo.equation = cfg.mode == RunMode::single_complete
                       ? MasterEquation::complete
                       : MasterEquation::postselected;
    const auto result = evolve(h, jumps, evo, rho0);
    for (int la : masks_la) {
      std::vector<double> series;
      series.reserve(result.states.size());
      for (const auto& rho : result.states)
        series.push_back(renyi2(partial_trace(rho, basis, {la})));
      if (cfg.report == ReportKind::series) {
        for (size_t i = 0; i < result.times.size(); ++i)
          rows.push_back(fmt(result.times[i]) + "," + fmt(job.gamma) + "," +
                         std::to_string(la) + "," + fmt(series[i]));
      } else {
        rows.push_back(std::to_string(la) + "," + fmt(job.gamma) + "," +
                       fmt(saturation_value(series)) + "," +
                       fmt(saturation_stderr(series)));
      }
    }
  }
  return rows;
}

std::vector<std::string> run_trajectory_job(const RunConfig& cfg,
                                            const Job& job) {
  const FockBasis basis = build_basis(job.n_sites, job.n_bosons);
  const Matrix h = build_hamiltonian(
      basis, {.j_hop = cfg.j, .u_int = cfg.u, .boundary = cfg.boundary});
  const JumpOperatorSet jumps = build_jump_operators(basis);
  const Vector phi0 =
      parse_product_state(resolve_initial_state(cfg, job.n_sites), basis);

  TrajectoryConfig traj;
  traj.n_trajectories = cfg.n_trajectories;
  traj.seed = cfg.seed;
  traj.dt = cfg.t_total / cfg.n_steps;
  traj.t_total = cfg.t_total;
  traj.gamma = job.gamma;
  traj.record_every = cfg.record_every;

  std::vector<std::string> rows;
  const bool sweeping_sites = !cfg.sweep_sites.empty();
  for (int la : resolve_subsystems(cfg, job.n_sites)) {
    const SubsystemMask mask{la};
    std::vector<double> times;
    std::vector<double> series;
    std::vector<double> errors;
    if (cfg.n_trajectories == 1) {
      const auto rec = run_trajectory(h, jumps, basis, traj, phi0, mask,
                                      derive_seed(cfg.seed, 0));
      times = rec.times;
      for (double p : rec.purities) series.push_back(-std::log(p));
      errors.assign(series.size(), 0.0);
    } else {
      const auto records = run_ensemble(h, jumps, basis, traj, phi0, mask);
      const auto est = ensemble_entropy(records);
      times = est.times;
      series = est.s_new;
      errors = est.stderr_;
    }
    if (cfg.report == ReportKind::series) {
      for (size_t i = 0; i < times.size(); ++i)
        rows.push_back(fmt(times[i]) + "," + fmt(job.gamma) + "," +
                       std::to_string(la) + "," + fmt(series[i]));
    } else {
      // saturation of the ensemble entropy; the error bar is the mean
      // per-time standard error over the averaging window (tail values are
      // correlated across time, so they are not averaged down)
      const size_t tail = std::max<size_t>(1, series.size() / 10);
      double err = 0.0;
      for (size_t i = series.size() - tail; i < series.size(); ++i)
        err += errors[i];
      err /= static_cast<double>(tail);
      rows.push_back(
          std::to_string(sweeping_sites ? job.n_sites : la) + "," +
          fmt(job.gamma) + "," + fmt(saturation_value(series)) + "," +
          fmt(err));
    }
  }
  return rows;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, int threads) {
  validate_config(cfg);
  const auto jobs = sweep_jobs(cfg);
  std::vector<std::vector<std::string>> results(jobs.size());

  auto work = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k)
      results[k] = cfg.mode == RunMode::trajectories
                       ? run_trajectory_job(cfg, jobs[k])
                       : run_master_job(cfg, jobs[k]);
  };
  const size_t n_threads = static_cast<size_t>(
      std::max(1, std::min<int>(threads, static_cast<int>(jobs.size()))));
  if (n_threads <= 1) {
    work(0, jobs.size());
  } else {
    // one slot per job; merge order below is fixed, so output is
    // thread-count independent
    std::vector<std::thread> pool;
    const size_t chunk = (jobs.size() + n_threads - 1) / n_threads;
    for (size_t t = 0; t < n_threads; ++t) {
      const size_t begin = t * chunk;
      const size_t end = std::min(jobs.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  const std::filesystem::path path(cfg.output_path);
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + cfg.output_path);
  out << "## mipt-sim " << kVersion << "\n";
  const std::string echo = serialize_config(cfg);
  size_t pos = 0;
  while (pos < echo.size()) {
    const size_t nl = echo.find('\n', pos);
    out << "# " << echo.substr(pos, nl - pos) << "\n";
    pos = nl + 1;
  }
  out << (cfg.report == ReportKind::series ? "t,gamma,L_A,value"
                                           : "sweep_var,gamma,value,stderr")
      << "\n";
  long count = 0;
  for (const auto& rows : results)
    for (const auto& row : rows) {
      out << row << "\n";
      ++count;
    }
  return {cfg.output_path, count};
}

}  // namespace mipt
