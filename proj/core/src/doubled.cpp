#include "mipt/doubled.hpp"

#include <cmath>
#include <string>
#include <utility>

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

int resolve_retained(const JumpOperatorSet& jumps, int retained) {
  const int n = jumps.size();
  if (retained == 0) return n;
  if (retained < 1 || retained > n)
    throw DimensionMismatch("retained pair count " + std::to_string(retained) +
                            " outside [1, " + std::to_string(n) + "]");
  return retained;
}

// Sector-state pairs (row, col) sharing one B pattern, with the A patterns
// they carry. Used by the doubled partial trace.
struct APair {
  int a_row;
  int a_col;
  int row;
  int col;
};

// keep_prefix: trace over the suffix sites, keep the prefix patterns (and
// vice versa)
std::vector<APair> pairs_with_common_traced_part(const FockBasis& basis,
                                                 int la, bool keep_prefix) {
  std::vector<APair> pairs;
  const int d = basis.dim();
  for (int m = 0; m < d; ++m) {
    const std::uint32_t sm = basis.state(m);
    const std::uint32_t traced =
        keep_prefix ? basis.suffix_part(sm, la) : basis.prefix_part(sm, la);
    for (int n = 0; n < d; ++n) {
      const std::uint32_t sn = basis.state(n);
      const std::uint32_t other =
          keep_prefix ? basis.suffix_part(sn, la) : basis.prefix_part(sn, la);
      if (other != traced) continue;
      if (keep_prefix) {
        pairs.push_back(
            {static_cast<int>(basis.prefix_part(sm, la)),
             static_cast<int>(basis.prefix_part(sn, la)), m, n});
      } else {
        pairs.push_back(
            {static_cast<int>(basis.suffix_part(sm, la)),
             static_cast<int>(basis.suffix_part(sn, la)), m, n});
      }
    }
  }
  return pairs;
}

Matrix doubled_reduction(const Matrix& rho_d, const FockBasis& basis,
                         SubsystemMask mask, bool keep_prefix) {
  const int d = basis.dim();
  require_square(rho_d, d * d, "rho_d");
  if (mask.prefix_len <= 0 || mask.prefix_len >= basis.n_sites)
    throw DimensionMismatch("subsystem prefix length must satisfy 0 < L_A < " +
                            std::to_string(basis.n_sites));
  const int kept_sites =
      keep_prefix ? mask.prefix_len : basis.n_sites - mask.prefix_len;
  const int da = 1 << kept_sites;
  const auto pairs =
      pairs_with_common_traced_part(basis, mask.prefix_len, keep_prefix);
  Matrix out = Matrix::Zero(da * da, da * da);
  for (const auto& pl : pairs)
    for (const auto& pr : pairs)
      out(pl.a_row * da + pr.a_row, pl.a_col * da + pr.a_col) +=
          rho_d(pl.row * d + pr.row, pl.col * d + pr.col);
  return out;
}

Complex swap_trace_of_reduced(const Matrix& reduced, int da) {
  Complex acc(0, 0);
  for (int u = 0; u < da; ++u)
    for (int v = 0; v < da; ++v) acc += reduced(v * da + u, u * da + v);
  return acc;
}

double validated_swap_value(Complex tr) {
  if (std::abs(tr.imag()) > tol::swap_imag || !(tr.real() > 0.0))
    throw NonPositiveSwapTrace("swap trace " + std::to_string(tr.real()) +
                               " + " + std::to_string(tr.imag()) + "i");
  return tr.real();
}

// Right-multiplication by H^D = H (x) I + I (x) H for one real part of the
// doubled state, done as groups of (d^2 x d) * (d x d) products on column
// blocks (I (x) H) and stride-d column combs (H (x) I).
class DoubledRhsEngine {
 public:
  DoubledRhsEngine(const Matrix& h, const JumpOperatorSet& jumps, double gamma,
                   int retained)
      : d_(static_cast<int>(h.rows())),
        dd_(d_ * d_),
        gamma_(gamma),
        retained_(resolve_retained(jumps, retained)) {
    fast_ = h.imag().cwiseAbs().maxCoeff() == 0.0 && jumps.diagonal_real();
    complete_ = jumps.is_complete();
    if (!fast_) {
      hd_ = doubled_hamiltonian(h);
      jumps_ = &jumps;
      return;
    }
    h_real_ = h.real();
    if (gamma_ > 0.0) {
      // EPR weights: W = sum_{a<=m} w_a w_a^T with w_a[(m,s)] = l_a[m] l_a[s]
      w_ = RealMatrix::Zero(dd_, dd_);
      RealVector wa(dd_);
      for (int a = 0; a < retained_; ++a) {
        const RealVector diag = jumps.real_diagonal(a);
        for (int m = 0; m < d_; ++m)
          for (int s = 0; s < d_; ++s) wa(m * d_ + s) = diag(m) * diag(s);
        w_.noalias() += wa * wa.transpose();
      }
      w_diag_ = w_.diagonal();
      if (!complete_) {
        // diagonal of sum_{a,b} (L_a^+L_a) (x) (L_b^+L_b)
        RealVector c = RealVector::Zero(d_);
        for (int a = 0; a < jumps.size(); ++a)
          c.array() += jumps.real_diagonal(a).array().square();
        g_half_.resize(dd_, dd_);
        for (int r = 0; r < dd_; ++r) {
          const double gr = c(r / d_) * c(r % d_);
          for (int cidx = 0; cidx < dd_; ++cidx)
            g_half_(r, cidx) = 0.5 * (gr + c(cidx / d_) * c(cidx % d_));
        }
      }
    }
    px_.resize(dd_, dd_);
    py_.resize(dd_, dd_);
  }

  bool fast() const { return fast_; }

  void eval(const RealMatrix& x, const RealMatrix& y, RealMatrix& kx,
            RealMatrix& ky) {
    right_mult_hd(x, px_);
    right_mult_hd(y, py_);
    // -i[H^D, rho] with rho = x + iy and P = rho H^D:
    // real part -(Py + Py^T), imaginary part Px - Px^T
    kx = -(py_ + py_.transpose());
    ky = px_ - px_.transpose();
    if (gamma_ == 0.0) return;

    const double den = (w_diag_.array() * x.diagonal().array()).sum();
    if (den <= tol::denominator)
      throw DenominatorVanished("EPR post-selection weight " +
                                std::to_string(den));
    const double c = gamma_ / den;
    if (complete_) {
      kx.array() += c * (w_.array() * x.array()) - gamma_ * x.array();
      ky.array() += c * (w_.array() * y.array()) - gamma_ * y.array();
    } else {
      kx.array() += c * (w_.array() * x.array()) -
                    gamma_ * (g_half_.array() * x.array());
      ky.array() += c * (w_.array() * y.array()) -
                    gamma_ * (g_half_.array() * y.array());
    }
  }

  Matrix eval_general(const Matrix& rho) const {
    return rhs_doubled(hd_, *jumps_, gamma_, rho, retained_);
  }

 private:
  void right_mult_hd(const RealMatrix& a, RealMatrix& out) const {
    for (int n = 0; n < d_; ++n)
      out.middleCols(n * d_, d_).noalias() = a.middleCols(n * d_, d_) * h_real_;
    using CMap = Eigen::Map<const RealMatrix, 0, Eigen::OuterStride<>>;
    using MMap = Eigen::Map<RealMatrix, 0, Eigen::OuterStride<>>;
    const Eigen::Index outer = static_cast<Eigen::Index>(d_) * dd_;
    for (int t = 0; t < d_; ++t) {
      CMap src(a.data() + static_cast<Eigen::Index>(t) * dd_, dd_, d_,
               Eigen::OuterStride<>(outer));
      MMap dst(out.data() + static_cast<Eigen::Index>(t) * dd_, dd_, d_,
               Eigen::OuterStride<>(outer));
      dst.noalias() += src * h_real_;
    }
  }

  int d_;
  int dd_;
  double gamma_;
  int retained_;
  bool fast_ = false;
  bool complete_ = false;
  RealMatrix h_real_;
  RealMatrix w_;
  RealVector w_diag_;
  RealMatrix g_half_;
  RealMatrix px_, py_;
  Matrix hd_;
  const JumpOperatorSet* jumps_ = nullptr;
};

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  const int ar = static_cast<int>(a.rows()), ac = static_cast<int>(a.cols());
  const int br = static_cast<int>(b.rows()), bc = static_cast<int>(b.cols());
  Matrix out(ar * br, ac * bc);
  for (int i = 0; i < ar; ++i)
    for (int j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Matrix tensor_square(const Matrix& rho) { return kron(rho, rho); }

Matrix doubled_hamiltonian(const Matrix& h) {
  const int d = static_cast<int>(h.rows());
  require_square(h, d, "H");
  const Matrix id = Matrix::Identity(d, d);
  return kron(h, id) + kron(id, h);
}

Matrix rhs_doubled(const Matrix& hd, const JumpOperatorSet& jumps, double gamma,
                   const Matrix& rho_d, int retained_pairs) {
  const int d2 = static_cast<int>(rho_d.rows());
  require_square(rho_d, d2, "rho_d");
  require_square(hd, d2, "H_d");
  const int d = jumps.dim();
  if (jumps.size() > 0 && d * d != d2)
    throw DimensionMismatch("jump operators act on dimension " +
                            std::to_string(d) + ", doubled state has " +
                            std::to_string(d2));

  Matrix out = Complex(0, -1) * (hd * rho_d - rho_d * hd);
  if (gamma == 0.0 || jumps.size() == 0) return out;
  const int m = resolve_retained(jumps, retained_pairs);

  Matrix num = Matrix::Zero(d2, d2);
  for (int a = 0; a < m; ++a) {
    const Matrix pa = kron(jumps.ops[static_cast<size_t>(a)],
                           jumps.ops[static_cast<size_t>(a)]);
    num.noalias() += pa * rho_d * pa.adjoint();
  }
  const double den = num.trace().real();
  if (den <= tol::denominator)
    throw DenominatorVanished("EPR post-selection weight " +
                              std::to_string(den));
  out += (gamma / den) * num;

  if (jumps.is_complete()) {
    out -= gamma * rho_d;  // sum_{a,b} (L_a^+L_a) (x) (L_b^+L_b) = I
  } else {
    Matrix c = Matrix::Zero(d, d);
    for (const auto& l : jumps.ops) c.noalias() += l.adjoint() * l;
    const Matrix g = kron(c, c);
    out.noalias() -= (0.5 * gamma) * (g * rho_d + rho_d * g);
  }
  return out;
}

Matrix doubled_reduced_on_a(const Matrix& rho_d, const FockBasis& basis,
                            SubsystemMask mask) {
  return doubled_reduction(rho_d, basis, mask, true);
}

double swap_renyi_entropy(const Matrix& rho_d, const FockBasis& basis,
                          SubsystemMask mask) {
  const Matrix reduced = doubled_reduction(rho_d, basis, mask, true);
  const int da = 1 << mask.prefix_len;
  return -std::log(validated_swap_value(swap_trace_of_reduced(reduced, da)));
}

double swap_renyi_entropy_complement(const Matrix& rho_d,
                                     const FockBasis& basis,
                                     SubsystemMask mask) {
  const Matrix reduced = doubled_reduction(rho_d, basis, mask, false);
  const int db = 1 << (basis.n_sites - mask.prefix_len);
  return -std::log(validated_swap_value(swap_trace_of_reduced(reduced, db)));
}

DoubledEvolutionResult evolve_doubled(const Matrix& h,
                                      const JumpOperatorSet& jumps,
                                      const FockBasis& basis,
                                      const EvolutionConfig& cfg,
                                      const Matrix& rho0,
                                      std::span<const SubsystemMask> masks) {
  if (cfg.n_steps < 1 || cfg.t_total <= 0.0)
    throw ConfigError("evolution needs n_steps >= 1 and t_total > 0");
  if (cfg.measurement_rate < 0.0)
    throw ConfigError("measurement rate must be nonnegative");
  if (masks.empty()) throw DimensionMismatch("need at least one mask");
  const int d = basis.dim();
  require_square(rho0, d, "rho0");
  require_square(h, d, "H");
  for (const auto& mask : masks)
    if (mask.prefix_len <= 0 || mask.prefix_len >= basis.n_sites)
      throw DimensionMismatch("invalid mask");

  DoubledRhsEngine engine(h, jumps, cfg.measurement_rate,
                          cfg.retained_channels);
  const double dt = cfg.t_total / cfg.n_steps;
  const int cadence = cfg.check_every > 0 ? cfg.check_every : cfg.n_steps;
  const int dd = d * d;

  DoubledEvolutionResult result;
  result.masks.assign(masks.begin(), masks.end());
  result.entropies.resize(masks.size());

  auto emit = [&](const Matrix& rho_d, long step) {
    const StateCheck c = check_density_invariants(rho_d);
    if (!c.ok())
      throw InvariantViolation(
          "doubled-state invariant failed at step " + std::to_string(step) +
              ": trace_error=" + std::to_string(c.trace_error) +
              " hermiticity_error=" + std::to_string(c.hermiticity_error) +
              " min_eigenvalue=" + std::to_string(c.min_eigenvalue),
          step);
    result.times.push_back(static_cast<double>(step) * dt);
    result.checks.push_back(c);
    for (size_t k = 0; k < masks.size(); ++k)
      result.entropies[k].push_back(
          swap_renyi_entropy(rho_d, basis, masks[k]));
  };

  if (engine.fast()) {
    RealMatrix x = tensor_square(rho0).real();
    RealMatrix y = tensor_square(rho0).imag();
    RealMatrix sx(dd, dd), sy(dd, dd), kx(dd, dd), ky(dd, dd), ax(dd, dd),
        ay(dd, dd);
    Matrix snapshot(dd, dd);
    auto assemble = [&]() {
      snapshot.real() = x;
      snapshot.imag() = y;
      return snapshot;
    };
    emit(assemble(), 0);
    for (long step = 1; step <= cfg.n_steps; ++step) {
      engine.eval(x, y, kx, ky);
      ax = kx;
      ay = ky;
      sx = x + (0.5 * dt) * kx;
      sy = y + (0.5 * dt) * ky;
      engine.eval(sx, sy, kx, ky);
      ax += 2.0 * kx;
      ay += 2.0 * ky;
      sx = x + (0.5 * dt) * kx;
      sy = y + (0.5 * dt) * ky;
      engine.eval(sx, sy, kx, ky);
      ax += 2.0 * kx;
      ay += 2.0 * ky;
      sx = x + dt * kx;
      sy = y + dt * ky;
      engine.eval(sx, sy, kx, ky);
      ax += kx;
      ay += ky;
      x += (dt / 6.0) * ax;
      y += (dt / 6.0) * ay;
      if (step % cadence == 0 || step == cfg.n_steps) emit(assemble(), step);
    }
    result.final_state = assemble();
  } else {
    Matrix rho_d = tensor_square(rho0);
    auto rhs = [&](const Matrix& r) { return engine.eval_general(r); };
    emit(rho_d, 0);
    for (long step = 1; step <= cfg.n_steps; ++step) {
      rho_d = rk4_step(rhs, rho_d, dt);
      if (step % cadence == 0 || step == cfg.n_steps) emit(rho_d, step);
    }
    result.final_state = rho_d;
  }
  return result;
}

DoubledEvolutionResult evolve_doubled(const Matrix& h,
                                      const JumpOperatorSet& jumps,
                                      const FockBasis& basis,
                                      const EvolutionConfig& cfg,
                                      const Matrix& rho0, SubsystemMask mask) {
  const SubsystemMask one[] = {mask};
  return evolve_doubled(h, jumps, basis, cfg, rho0, one);
}

}  // namespace mipt
