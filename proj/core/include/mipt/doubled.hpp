#pragma once

#include <span>
#include <vector>

#include "mipt/fock.hpp"
#include "mipt/master.hpp"
#include "mipt/types.hpp"

namespace mipt {

/// Kronecker product with the left factor as the major index: the composite
/// row index of (m, s) is m*d + s. Every doubled-space object in this module
/// uses that convention.
Matrix kron(const Matrix& a, const Matrix& b);

/// rho^D = rho (x) rho on the doubled space, entries rho_mn * rho_st.
Matrix tensor_square(const Matrix& rho);

/// H^D = H (x) I + I (x) H.
Matrix doubled_hamiltonian(const Matrix& h);

/// Generalized equation of motion of the doubled density matrix:
///
///   drho^D/dt = -i[H^D, rho^D]
///             + gamma sum_a (L_a (x) L_a) rho^D (L_a (x) L_a)^+ / den
///             - gamma/2 sum_{a,b} {(L_a^+L_a) (x) (L_b^+L_b), rho^D}
///
/// with den = sum_b Tr[(L_b (x) L_b) rho^D (L_b (x) L_b)^+]. Pairing the
/// copies in the jump term projects both onto the same measurement record;
/// the denominator is the post-selection weight of that record. When the
/// single-copy set is complete the double-sum anticommutator collapses to
/// gamma * rho^D, which is taken as a fast path. retained_pairs = 0 keeps
/// every pair; a positive value truncates both the jump sum and den to the
/// first retained_pairs channels.
Matrix rhs_doubled(const Matrix& hd, const JumpOperatorSet& jumps, double gamma,
                   const Matrix& rho_d, int retained_pairs = 0);

/// Tr_{L_B,R_B} rho^D: operator on the A factors of both copies, indexed by
/// (alpha_L, alpha_R) pairs of A-occupation patterns with alpha_L major.
/// Dimension 4^prefix_len.
Matrix doubled_reduced_on_a(const Matrix& rho_d, const FockBasis& basis,
                            SubsystemMask mask);

/// S_A = -ln Tr_{L_A,R_A}[ X_A Tr_{L_B,R_B}(rho^D) ] where X_A swaps the A
/// factors of the two copies. For rho^D = rho (x) rho this equals
/// -ln Tr[(Tr_B rho)^2]. Throws NonPositiveSwapTrace when the swap trace has
/// an imaginary part above tol::swap_imag or is not positive.
double swap_renyi_entropy(const Matrix& rho_d, const FockBasis& basis,
                          SubsystemMask mask);

/// Same contraction for the complement B = sites prefix_len+1 .. n_sites
/// (trace over both A factors, swap the B factors). States in the EPR hull
/// satisfy S_A = S_B exactly.
double swap_renyi_entropy_complement(const Matrix& rho_d,
                                     const FockBasis& basis,
                                     SubsystemMask mask);

struct DoubledEvolutionResult {
  std::vector<double> times;
  std::vector<SubsystemMask> masks;
  /// entropies[k][i]: S_A for masks[k] at times[i].
  std::vector<std::vector<double>> entropies;
  /// Invariant measurements of the emitted doubled states.
  std::vector<StateCheck> checks;
  /// The doubled state at the final step (kept for oracle comparisons).
  Matrix final_state;

  double saturation(int mask_index = 0) const {
    return saturation_value(entropies[static_cast<size_t>(mask_index)]);
  }
};

/// Tensor-squares rho0 and integrates the doubled equation with RK4,
/// emitting (t, S_A) for every mask at the check_every cadence. Every
/// emitted state must pass the density-matrix checks (InvariantViolation
/// otherwise). cfg.equation is ignored: the doubled equation always carries
/// the EPR-paired jump term; cfg.retained_channels truncates the pair sum.
DoubledEvolutionResult evolve_doubled(const Matrix& h,
                                      const JumpOperatorSet& jumps,
                                      const FockBasis& basis,
                                      const EvolutionConfig& cfg,
                                      const Matrix& rho0,
                                      std::span<const SubsystemMask> masks);

/// Single-mask convenience overload.
DoubledEvolutionResult evolve_doubled(const Matrix& h,
                                      const JumpOperatorSet& jumps,
                                      const FockBasis& basis,
                                      const EvolutionConfig& cfg,
                                      const Matrix& rho0, SubsystemMask mask);

}  // namespace mipt
