#pragma once

#include <utility>
#include <vector>

#include "mipt/fock.hpp"
#include "mipt/types.hpp"

namespace mipt {

/// Contiguous bipartition: subsystem A is sites 1..prefix_len.
struct SubsystemMask {
  int prefix_len = 1;
};

enum class MasterEquation { complete, postselected };

struct EvolutionConfig {
  double t_total = 30.0;  // in units of 1/J
  int n_steps = 11000;
  double measurement_rate = 1.0;  // gamma, the constant measurement rate
  MasterEquation equation = MasterEquation::complete;
  int retained_channels = 0;  // m for post-selection; 0 keeps every channel
  int check_every = 50;       // emission / invariant-check cadence in steps
};

/// Per-state invariant measurements (evaluated at emission times).
struct StateCheck {
  double trace_error = 0.0;        // |Tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^+|
  double min_eigenvalue = 0.0;

  bool ok() const {
    return trace_error <= tol::trace && hermiticity_error <= tol::hermiticity &&
           min_eigenvalue >= -tol::positivity;
  }
};

StateCheck check_density_invariants(const Matrix& rho);

/// drho/dt = -i[H,rho] + gamma sum_a (L_a rho L_a^+ - 1/2 {L_a^+ L_a, rho}).
Matrix rhs_complete(const Matrix& h, const JumpOperatorSet& jumps, double gamma,
                    const Matrix& rho);

/// Nonlinear post-selected form: the jump sum keeps channels a = 1..m and is
/// normalized by sum_{b<=m} Tr(L_b rho L_b^+); the anticommutator still runs
/// over the full set. retained = 0 keeps every channel. Throws
/// DenominatorVanished when the retained weight falls below tol::denominator.
Matrix rhs_postselected(const Matrix& h, const JumpOperatorSet& jumps,
                        int retained, double gamma, const Matrix& rho);

/// One classical RK4 update. No renormalization is applied inside the step:
/// trace drift stays visible as a convergence diagnostic.
template <typename Rhs>
Matrix rk4_step(Rhs&& rhs, const Matrix& rho, double dt) {
  const Matrix k1 = rhs(rho);
  const Matrix k2 = rhs(rho + (0.5 * dt) * k1);
  const Matrix k3 = rhs(rho + (0.5 * dt) * k2);
  const Matrix k4 = rhs(rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Matrix> states;
};

/// Integrates the selected equation for n_steps RK4 steps, emitting the state
/// every check_every steps (plus the initial and final states). Every emitted
/// state must pass the three density-matrix checks or InvariantViolation is
/// thrown with the offending step.
EvolutionResult evolve(const Matrix& h, const JumpOperatorSet& jumps,
                       const EvolutionConfig& cfg, const Matrix& rho0);

/// Reduced state on subsystem A, indexed by all 2^prefix_len occupation
/// patterns of A (the complement constrains but does not fix the particle
/// number in A, so every local sector is kept).
Matrix partial_trace(const Matrix& rho, const FockBasis& basis,
                     SubsystemMask mask);

/// Reduced state on the complement B = sites prefix_len+1 .. n_sites.
Matrix partial_trace_complement(const Matrix& rho, const FockBasis& basis,
                                SubsystemMask mask);

/// Tr(rho^2) evaluated directly (no Hermiticity assumed).
double purity(const Matrix& rho);

/// Second Renyi entropy -ln Tr(rho^2), natural log. Throws NonPositivePurity
/// when the purity is not positive.
double renyi2(const Matrix& rho_reduced);

/// Mean over the last tenth of a series; the operational "saturation value"
/// of an entropy time series. stderr companion available via
/// saturation_stderr.
double saturation_value(const std::vector<double>& series);
double saturation_stderr(const std::vector<double>& series);

}  // namespace mipt
