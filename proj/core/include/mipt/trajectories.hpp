#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mipt/fock.hpp"
#include "mipt/master.hpp"
#include "mipt/random.hpp"
#include "mipt/types.hpp"

namespace mipt {

struct TrajectoryConfig {
  int n_trajectories = 100;
  std::uint64_t seed = 1;
  double dt = 30.0 / 11000;
  double t_total = 30.0;
  double gamma = 1.0;
  int record_every = 50;  // purity-recording cadence in steps
};

/// Per-step sampling record.
struct StepDiagnostics {
  double delta_p = 0.0;                // jump probability this step
  std::vector<double> channel_weights; // w_a = <phi|L_a^+ L_a|phi>
  std::optional<int> chosen;           // channel index if a jump fired
};

/// One stochastic realization.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> purities;  // Tr(rho_A^2) at each recorded time
  std::vector<std::pair<double, int>> jump_log;
  /// Diagnostics of the step that produced the state at times[k]
  /// (a stepless probe of the initial state at k = 0).
  std::vector<StepDiagnostics> final_norm_diagnostics;
};

/// Non-Hermitian generator of the no-jump evolution on the doubled space:
/// H (x) I + I (x) H - i gamma/2 sum_{a,b} (L_a^+L_a) (x) (L_b^+L_b).
/// For a complete jump set the anti-Hermitian part is -i gamma/2 times the
/// identity, so the no-jump drift is a uniform norm decay.
Matrix effective_hamiltonian(const Matrix& h, const JumpOperatorSet& jumps,
                             double gamma);

enum class TrajectoryForm {
  /// Paired jumps and a scalar anti-Hermitian part keep a product state
  /// |phi> (x) |phi> in product form, so only one copy is evolved: unitary
  /// first-order no-jump drift plus squared-weight channel sampling.
  /// Requires a complete jump set.
  single_copy,
  /// Full doubled-space wavefunction; used to validate the fast path.
  doubled,
};

/// First-order stochastic propagator of the doubled equation.
///
/// Each step draws one uniform for the jump/no-jump decision against
/// delta_p = gamma dt <Q> (Q the double-sum of squared jump operators; equal
/// to gamma dt for a complete set) and one uniform for the channel. The
/// channel distribution is proportional to
/// <phi^D| (L_a^+L_a) (x) (L_a^+L_a) |phi^D>, i.e. the squared single-copy
/// weights w_a^2 for product states: both copies must register the same
/// outcome. Both uniforms are always consumed so streams stay aligned
/// between forms.
class TrajectoryStepper {
 public:
  TrajectoryStepper(const Matrix& h, const JumpOperatorSet& jumps,
                    double gamma, TrajectoryForm form);

  int state_dim() const { return state_dim_; }
  TrajectoryForm form() const { return form_; }

  StepDiagnostics step(Vector& phi, double dt, Rng& rng) const;
  /// Deterministic-draw variant used by equivalence tests.
  StepDiagnostics step_with_draws(Vector& phi, double dt, double u_jump,
                                  double u_channel) const;
  /// Diagnostics of a state without advancing it.
  StepDiagnostics probe(const Vector& phi, double dt) const;

 private:
  std::vector<double> linear_weights(const Vector& phi) const;
  std::vector<double> paired_weights(const Vector& phi) const;
  void apply_channel(Vector& phi, int a) const;

  TrajectoryForm form_;
  int dim_;        // single-copy dimension
  int state_dim_;  // dim_ or dim_^2
  double gamma_;
  Matrix drift_;                   // H (single) or H^D_eff (doubled)
  bool diagonal_;
  std::vector<RealVector> l_diag_;   // jump-operator diagonals
  std::vector<RealVector> l2_diag_;  // diag(L_a^+ L_a)
  std::vector<Matrix> ops_;          // dense fallback
  Matrix q_;                         // doubled: sum_{a,b} (..) (x) (..)
};

/// Integrates one trajectory to t_total, recording the purity of the reduced
/// state on `mask` every record_every steps. Deterministic given the seed.
TrajectoryRecord run_trajectory(const Matrix& h, const JumpOperatorSet& jumps,
                                const FockBasis& basis,
                                const TrajectoryConfig& cfg, const Vector& phi0,
                                SubsystemMask mask, std::uint64_t seed,
                                TrajectoryForm form = TrajectoryForm::single_copy);

/// n_trajectories independent records with per-trajectory seeds
/// derive_seed(cfg.seed, k); reproducible regardless of thread count.
std::vector<TrajectoryRecord> run_ensemble(
    const Matrix& h, const JumpOperatorSet& jumps, const FockBasis& basis,
    const TrajectoryConfig& cfg, const Vector& phi0, SubsystemMask mask,
    TrajectoryForm form = TrajectoryForm::single_copy, int threads = 1);

struct EnsembleEntropy {
  std::vector<double> times;
  std::vector<double> s_new;   // -ln(mean purity)
  std::vector<double> stderr_; // delta method: sd(purity) / (mean sqrt(N))
};

/// Ensemble estimator of the entropy series. Requires >= 2 records sharing
/// one time grid (GridMismatch otherwise).
EnsembleEntropy ensemble_entropy(std::span<const TrajectoryRecord> records);

}  // namespace mipt
