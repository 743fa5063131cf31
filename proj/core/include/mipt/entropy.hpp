#pragma once

#include <vector>

#include "mipt/types.hpp"

namespace mipt {

/// One measurement record: its probability and the (normalized) state it
/// leaves behind.
struct Outcome {
  double probability = 0.0;
  Matrix state;
};

/// Explicit ensemble of measurement outcomes feeding the three entropy
/// functionals. Probabilities must sum to one; zero-probability outcomes are
/// accepted and ignored.
struct OutcomeEnsemble {
  std::vector<Outcome> outcomes;
};

/// Entropy of the averaged state: -ln Tr[(sum_c p_c rho_c)^2]. Includes the
/// classical record entropy on top of the per-outcome entanglement.
double s_total(const OutcomeEnsemble& ens);

/// -ln[sum_c p~_c Tr(rho_c^2)] with p~_c = p_c^2 / sum p^2. The squared
/// weights drop the classical record entropy, leaving the per-outcome part.
double s_new(const OutcomeEnsemble& ens);

/// Record-averaged per-outcome entropy: -sum_c p_c ln Tr(rho_c^2).
double s_old(const OutcomeEnsemble& ens);

}  // namespace mipt
