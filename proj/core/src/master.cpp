#include "mipt/master.hpp"

#include <cmath>
#include <string>

#include "mipt/errors.hpp"

namespace mipt {

namespace {

void require_square(const Matrix& m, int d, const char* what) {
  if (m.rows() != d || m.cols() != d)
    throw DimensionMismatch(std::string(what) + ": expected " +
                            std::to_string(d) + "x" + std::to_string(d) +
                            ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
}

void require_mask(const FockBasis& basis, SubsystemMask mask) {
  if (mask.prefix_len <= 0 || mask.prefix_len >= basis.n_sites)
    throw DimensionMismatch("subsystem prefix length must satisfy 0 < L_A < " +
                            std::to_string(basis.n_sites) + ", got " +
                            std::to_string(mask.prefix_len));
}

int resolve_retained(const JumpOperatorSet& jumps, int retained) {
  const int n = jumps.size();
  if (retained == 0) return n;
  if (retained < 1 || retained > n)
    throw DimensionMismatch("retained channel count " +
                            std::to_string(retained) + " outside [1, " +
                            std::to_string(n) + "]");
  return retained;
}

}  // namespace

StateCheck check_density_invariants(const Matrix& rho) {
  StateCheck c;
  c.trace_error = std::abs(rho.trace() - Complex(1, 0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm,
                                           Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

Matrix rhs_complete(const Matrix& h, const JumpOperatorSet& jumps, double gamma,
                    const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  require_square(rho, d, "rho");
  require_square(h, d, "H");
  Matrix out = Complex(0, -1) * (h * rho - rho * h);
  if (gamma == 0.0 || jumps.size() == 0) return out;
  Matrix c = Matrix::Zero(d, d);
  for (const auto& l : jumps.ops) {
    require_square(l, d, "jump operator");
    out.noalias() += gamma * (l * rho * l.adjoint());
    c.noalias() += l.adjoint() * l;
  }
  out.noalias() -= (0.5 * gamma) * (c * rho + rho * c);
  return out;
}

Matrix rhs_postselected(const Matrix& h, const JumpOperatorSet& jumps,
                        int retained, double gamma, const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  require_square(rho, d, "rho");
  require_square(h, d, "H");
  const int m = resolve_retained(jumps, retained);
  Matrix out = Complex(0, -1) * (h * rho - rho * h);
  if (gamma == 0.0 || jumps.size() == 0) return out;

  Matrix kept = Matrix::Zero(d, d);
  for (int a = 0; a < m; ++a) {
    const auto& l = jumps.ops[static_cast<size_t>(a)];
    require_square(l, d, "jump operator");
    kept.noalias() += l * rho * l.adjoint();
  }
  const double den = kept.trace().real();
  if (den <= tol::denominator)
    throw DenominatorVanished(
        "post-selection weight " + std::to_string(den) + " with m = " +
        std::to_string(m) + " retained channels");
  out += (gamma / den) * kept;

  Matrix c = Matrix::Zero(d, d);
  for (const auto& l : jumps.ops) c.noalias() += l.adjoint() * l;
  out.noalias() -= (0.5 * gamma) * (c * rho + rho * c);
  return out;
}

EvolutionResult evolve(const Matrix& h, const JumpOperatorSet& jumps,
                       const EvolutionConfig& cfg, const Matrix& rho0) {
  if (cfg.n_steps < 1 || cfg.t_total <= 0.0)
    throw ConfigError("evolution needs n_steps >= 1 and t_total > 0");
  if (cfg.measurement_rate < 0.0)
    throw ConfigError("measurement rate must be nonnegative");
  const int d = static_cast<int>(rho0.rows());
  require_square(rho0, d, "rho0");
  require_square(h, d, "H");
  const int m = cfg.equation == MasterEquation::postselected
                    ? resolve_retained(jumps, cfg.retained_channels)
                    : jumps.size();

  const double gamma = cfg.measurement_rate;
  auto rhs = [&](const Matrix& rho) {
    return cfg.equation == MasterEquation::complete
               ? rhs_complete(h, jumps, gamma, rho)
               : rhs_postselected(h, jumps, m, gamma, rho);
  };

  const double dt = cfg.t_total / cfg.n_steps;
  const int cadence = cfg.check_every > 0 ? cfg.check_every : cfg.n_steps;

  EvolutionResult result;
  auto emit = [&](const Matrix& rho, long step) {
    const StateCheck c = check_density_invariants(rho);
    if (!c.ok())
      throw InvariantViolation(
          "density-matrix invariant failed at step " + std::to_string(step) +
              ": trace_error=" + std::to_string(c.trace_error) +
              " hermiticity_error=" + std::to_string(c.hermiticity_error) +
              " min_eigenvalue=" + std::to_string(c.min_eigenvalue),
          step);
    result.times.push_back(static_cast<double>(step) * dt);
    result.states.push_back(rho);
  };

  Matrix rho = rho0;
  emit(rho, 0);
  for (long step = 1; step <= cfg.n_steps; ++step) {
    rho = rk4_step(rhs, rho, dt);
    if (step % cadence == 0 || step == cfg.n_steps) emit(rho, step);
  }
  return result;
}

Matrix partial_trace(const Matrix& rho, const FockBasis& basis,
                     SubsystemMask mask) {
  require_square(rho, basis.dim(), "rho");
  require_mask(basis, mask);
  const int la = mask.prefix_len;
  const int da = 1 << la;
  Matrix out = Matrix::Zero(da, da);
  const int d = basis.dim();
  for (int m = 0; m < d; ++m) {
    const std::uint32_t sm = basis.state(m);
    const std::uint32_t bm = basis.suffix_part(sm, la);
    for (int n = 0; n < d; ++n) {
      const std::uint32_t sn = basis.state(n);
      if (basis.suffix_part(sn, la) != bm) continue;
      out(static_cast<int>(basis.prefix_part(sm, la)),
          static_cast<int>(basis.prefix_part(sn, la))) += rho(m, n);
    }
  }
  return out;
}

Matrix partial_trace_complement(const Matrix& rho, const FockBasis& basis,
                                SubsystemMask mask) {
  require_square(rho, basis.dim(), "rho");
  require_mask(basis, mask);
  const int la = mask.prefix_len;
  const int db = 1 << (basis.n_sites - la);
  Matrix out = Matrix::Zero(db, db);
  const int d = basis.dim();
  for (int m = 0; m < d; ++m) {
    const std::uint32_t sm = basis.state(m);
    const std::uint32_t am = basis.prefix_part(sm, la);
    for (int n = 0; n < d; ++n) {
      const std::uint32_t sn = basis.state(n);
      if (basis.prefix_part(sn, la) != am) continue;
      out(static_cast<int>(basis.suffix_part(sm, la)),
          static_cast<int>(basis.suffix_part(sn, la))) += rho(m, n);
    }
  }
  return out;
}

double purity(const Matrix& rho) {
  // Tr(rho^2) = sum_{ij} rho_ij rho_ji without forming the product
  return rho.transpose().cwiseProduct(rho).sum().real();
}

double renyi2(const Matrix& rho_reduced) {
  const double p = purity(rho_reduced);
  if (!(p > 0.0))
    throw NonPositivePurity("Tr(rho^2) = " + std::to_string(p));
  return -std::log(p);
}

double saturation_value(const std::vector<double>& series) {
  if (series.empty()) throw DimensionMismatch("empty series");
  const size_t tail = std::max<size_t>(1, series.size() / 10);
  double sum = 0.0;
  for (size_t i = series.size() - tail; i < series.size(); ++i)
    sum += series[i];
  return sum / static_cast<double>(tail);
}

double saturation_stderr(const std::vector<double>& series) {
  if (series.empty()) throw DimensionMismatch("empty series");
  const size_t tail = std::max<size_t>(1, series.size() / 10);
  if (tail < 2) return 0.0;
  const double mean = saturation_value(series);
  double ss = 0.0;
  for (size_t i = series.size() - tail; i < series.size(); ++i)
    ss += (series[i] - mean) * (series[i] - mean);
  const double n = static_cast<double>(tail);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace mipt
