#include "mipt/trajectories.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "mipt/doubled.hpp"
#include "mipt/errors.hpp"

namespace mipt {

namespace {

double reduced_purity_single(const Vector& phi, const FockBasis& basis,
                             SubsystemMask mask) {
  const Matrix rho = phi * phi.adjoint();
  return purity(partial_trace(rho, basis, mask));
}

double reduced_purity_doubled(const Vector& phi_d, const FockBasis& basis,
                              SubsystemMask mask) {
  const Matrix rho_d = phi_d * phi_d.adjoint();
  // swap trace = Tr(rho_A^2) without the log
  const Matrix reduced = doubled_reduced_on_a(rho_d, basis, mask);
  const int da = 1 << mask.prefix_len;
  Complex acc(0, 0);
  for (int u = 0; u < da; ++u)
    for (int v = 0; v < da; ++v) acc += reduced(v * da + u, u * da + v);
  return acc.real();
}

}  // namespace

Matrix effective_hamiltonian(const Matrix& h, const JumpOperatorSet& jumps,
                             double gamma) {
  const int d = static_cast<int>(h.rows());
  if (h.cols() != d) throw DimensionMismatch("H must be square");
  Matrix q = Matrix::Zero(d, d);
  for (const auto& l : jumps.ops) {
    if (l.rows() != d || l.cols() != d)
      throw DimensionMismatch("jump operator dimension mismatch");
    q.noalias() += l.adjoint() * l;
  }
  return doubled_hamiltonian(h) -
         Complex(0, 0.5 * gamma) * kron(q, q);
}

TrajectoryStepper::TrajectoryStepper(const Matrix& h,
                                     const JumpOperatorSet& jumps,
                                     double gamma, TrajectoryForm form)
    : form_(form),
      dim_(static_cast<int>(h.rows())),
      gamma_(gamma) {
  if (h.cols() != dim_) throw DimensionMismatch("H must be square");
  if (jumps.dim() != dim_)
    throw DimensionMismatch("jump operators do not match H");
  diagonal_ = jumps.diagonal_real();
  if (form_ == TrajectoryForm::single_copy) {
    if (!jumps.is_complete(1e-10))
      throw DimensionMismatch(
          "single-copy trajectory form requires a complete jump set");
    state_dim_ = dim_;
    drift_ = h;
  } else {
    state_dim_ = dim_ * dim_;
    drift_ = effective_hamiltonian(h, jumps, gamma);
    Matrix c = Matrix::Zero(dim_, dim_);
    for (const auto& l : jumps.ops) c.noalias() += l.adjoint() * l;
    q_ = kron(c, c);
  }
  for (int a = 0; a < jumps.size(); ++a) {
    ops_.push_back(jumps.ops[static_cast<size_t>(a)]);
    if (diagonal_) {
      l_diag_.push_back(jumps.real_diagonal(a));
      l2_diag_.push_back(l_diag_.back().array().square().matrix());
    }
  }
}

std::vector<double> TrajectoryStepper::linear_weights(const Vector& phi) const {
  // single-copy w_a = <phi|L_a^+L_a|phi>; doubled counterpart uses
  // (L_a^+L_a) (x) I so both agree on product states
  std::vector<double> w(ops_.size());
  if (form_ == TrajectoryForm::single_copy) {
    for (size_t a = 0; a < ops_.size(); ++a) {
      if (diagonal_) {
        w[a] = (l2_diag_[a].array() * phi.array().abs2()).sum();
      } else {
        w[a] = (ops_[a] * phi).squaredNorm();
      }
    }
  } else {
    const int d = dim_;
    for (size_t a = 0; a < ops_.size(); ++a) {
      double acc = 0.0;
      if (diagonal_) {
        for (int m = 0; m < d; ++m)
          for (int s = 0; s < d; ++s)
            acc += l2_diag_[a](m) * std::norm(phi(m * d + s));
      } else {
        const Matrix l2 = ops_[a].adjoint() * ops_[a];
        const Matrix op = kron(l2, Matrix::Identity(d, d));
        acc = (phi.adjoint() * (op * phi)).value().real();
      }
      w[a] = acc;
    }
  }
  return w;
}

std::vector<double> TrajectoryStepper::paired_weights(const Vector& phi) const {
  // delta_p_a / dt = <phi^D| (L_a^+L_a) (x) (L_a^+L_a) |phi^D>
  std::vector<double> w(ops_.size());
  if (form_ == TrajectoryForm::single_copy) {
    const auto lin = linear_weights(phi);
    for (size_t a = 0; a < lin.size(); ++a) w[a] = lin[a] * lin[a];
  } else {
    const int d = dim_;
    for (size_t a = 0; a < ops_.size(); ++a) {
      double acc = 0.0;
      if (diagonal_) {
        for (int m = 0; m < d; ++m)
          for (int s = 0; s < d; ++s)
            acc += l2_diag_[a](m) * l2_diag_[a](s) * std::norm(phi(m * d + s));
      } else {
        const Matrix l2 = ops_[a].adjoint() * ops_[a];
        acc = (phi.adjoint() * (kron(l2, l2) * phi)).value().real();
      }
      w[a] = acc;
    }
  }
  return w;
}

void TrajectoryStepper::apply_channel(Vector& phi, int a) const {
  const size_t idx = static_cast<size_t>(a);
  if (form_ == TrajectoryForm::single_copy) {
    if (diagonal_) {
      phi.array() *= l_diag_[idx].array();
    } else {
      phi = ops_[idx] * phi;
    }
  } else {
    const int d = dim_;
    if (diagonal_) {
      for (int m = 0; m < d; ++m)
        for (int s = 0; s < d; ++s)
          phi(m * d + s) *= l_diag_[idx](m) * l_diag_[idx](s);
    } else {
      phi = kron(ops_[idx], ops_[idx]) * phi;
    }
  }
}

StepDiagnostics TrajectoryStepper::probe(const Vector& phi, double dt) const {
  StepDiagnostics diag;
  diag.channel_weights = linear_weights(phi);
  if (form_ == TrajectoryForm::single_copy) {
    double sum = 0.0;
    for (double w : diag.channel_weights) sum += w;
    diag.delta_p = gamma_ * dt * sum * sum;
  } else {
    diag.delta_p =
        gamma_ * dt * (phi.adjoint() * (q_ * phi)).value().real();
  }
  return diag;
}

StepDiagnostics TrajectoryStepper::step_with_draws(Vector& phi, double dt,
                                                   double u_jump,
                                                   double u_channel) const {
  if (phi.size() != state_dim_)
    throw DimensionMismatch("trajectory state has dimension " +
                            std::to_string(phi.size()) + ", expected " +
                            std::to_string(state_dim_));
  StepDiagnostics diag = probe(phi, dt);
  if (u_jump < diag.delta_p) {
    const auto pw = paired_weights(phi);
    double total = 0.0;
    for (double w : pw) total += w;
    if (total <= 0.0)
      throw ZeroNormAfterJump("all channel weights vanished");
    int chosen = static_cast<int>(pw.size()) - 1;
    double acc = 0.0;
    for (size_t a = 0; a < pw.size(); ++a) {
      acc += pw[a] / total;
      if (u_channel < acc) {
        chosen = static_cast<int>(a);
        break;
      }
    }
    apply_channel(phi, chosen);
    const double norm = phi.norm();
    if (norm <= 1e-300)
      throw ZeroNormAfterJump("jump channel " + std::to_string(chosen) +
                              " annihilated the state");
    phi /= norm;
    diag.chosen = chosen;
  } else {
    // first-order no-jump drift, then renormalization; for the single copy
    // the scalar decay of a complete set drops out of the normalized state
    phi = phi - Complex(0, dt) * (drift_ * phi);
    phi.normalize();
  }
  return diag;
}

StepDiagnostics TrajectoryStepper::step(Vector& phi, double dt,
                                        Rng& rng) const {
  const double u_jump = rng.uniform();
  const double u_channel = rng.uniform();
  return step_with_draws(phi, dt, u_jump, u_channel);
}

TrajectoryRecord run_trajectory(const Matrix& h, const JumpOperatorSet& jumps,
                                const FockBasis& basis,
                                const TrajectoryConfig& cfg, const Vector& phi0,
                                SubsystemMask mask, std::uint64_t seed,
                                TrajectoryForm form) {
  if (cfg.dt <= 0.0 || cfg.t_total <= 0.0)
    throw ConfigError("trajectory dt and t_total must be positive");
  if (cfg.dt * cfg.gamma >= 0.1)
    throw ConfigError("dt * gamma = " + std::to_string(cfg.dt * cfg.gamma) +
                      " too coarse for the first-order step (need < 0.1)");
  if (phi0.size() != basis.dim())
    throw DimensionMismatch("phi0 does not match the basis");

  TrajectoryStepper stepper(h, jumps, cfg.gamma, form);
  const long n_steps = std::lround(cfg.t_total / cfg.dt);
  if (n_steps < 1) throw ConfigError("t_total shorter than one step");
  const int cadence = cfg.record_every > 0 ? cfg.record_every : n_steps;

  Vector phi;
  if (form == TrajectoryForm::single_copy) {
    phi = phi0;
  } else {
    phi = Vector(basis.dim() * basis.dim());
    for (int m = 0; m < basis.dim(); ++m)
      for (int s = 0; s < basis.dim(); ++s)
        phi(m * basis.dim() + s) = phi0(m) * phi0(s);
  }
  phi.normalize();

  Rng rng(seed);
  TrajectoryRecord rec;
  auto record = [&](long step, const StepDiagnostics& diag) {
    rec.times.push_back(static_cast<double>(step) * cfg.dt);
    rec.purities.push_back(form == TrajectoryForm::single_copy
                               ? reduced_purity_single(phi, basis, mask)
                               : reduced_purity_doubled(phi, basis, mask));
    rec.final_norm_diagnostics.push_back(diag);
  };

  record(0, stepper.probe(phi, cfg.dt));
  for (long step = 1; step <= n_steps; ++step) {
    StepDiagnostics diag = stepper.step(phi, cfg.dt, rng);
    if (diag.chosen)
      rec.jump_log.emplace_back(static_cast<double>(step) * cfg.dt,
                                *diag.chosen);
    if (step % cadence == 0 || step == n_steps) record(step, diag);
  }
  return rec;
}

std::vector<TrajectoryRecord> run_ensemble(
    const Matrix& h, const JumpOperatorSet& jumps, const FockBasis& basis,
    const TrajectoryConfig& cfg, const Vector& phi0, SubsystemMask mask,
    TrajectoryForm form, int threads) {
  if (cfg.n_trajectories < 1)
    throw ConfigError("n_trajectories must be positive");
  std::vector<TrajectoryRecord> records(
      static_cast<size_t>(cfg.n_trajectories));
  auto work = [&](int begin, int end) {
    for (int k = begin; k < end; ++k)
      records[static_cast<size_t>(k)] =
          run_trajectory(h, jumps, basis, cfg, phi0, mask,
                         derive_seed(cfg.seed, static_cast<std::uint64_t>(k)),
                         form);
  };
  const int n_threads =
      std::max(1, std::min(threads, cfg.n_trajectories));
  if (n_threads == 1) {
    work(0, cfg.n_trajectories);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.n_trajectories + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(cfg.n_trajectories, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

EnsembleEntropy ensemble_entropy(std::span<const TrajectoryRecord> records) {
  if (records.size() < 2)
    throw GridMismatch("ensemble estimator needs at least 2 records");
  const auto& grid = records[0].times;
  for (const auto& rec : records)
    if (rec.times != grid)
      throw GridMismatch("trajectory records disagree on the time grid");

  const double n = static_cast<double>(records.size());
  EnsembleEntropy out;
  out.times = grid;
  out.s_new.resize(grid.size());
  out.stderr_.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    double mean = 0.0;
    for (const auto& rec : records) mean += rec.purities[i];
    mean /= n;
    double ss = 0.0;
    for (const auto& rec : records) {
      const double dev = rec.purities[i] - mean;
      ss += dev * dev;
    }
    const double sd = records.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    if (!(mean > 0.0))
      throw NonPositivePurity("ensemble mean purity " + std::to_string(mean));
    out.s_new[i] = -std::log(mean);
    out.stderr_[i] = sd / (mean * std::sqrt(n));
  }
  return out;
}

}  // namespace mipt
