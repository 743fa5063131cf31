#include "mipt/entropy.hpp"

#include <cmath>
#include <string>

#include "mipt/errors.hpp"
#include "mipt/master.hpp"

namespace mipt {

namespace {

// Validates normalization and state invariants, returning the outcomes that
// carry weight.
std::vector<const Outcome*> live_outcomes(const OutcomeEnsemble& ens) {
  if (ens.outcomes.empty()) throw InvalidEnsemble("empty ensemble");
  double total = 0.0;
  const Eigen::Index d = ens.outcomes.front().state.rows();
  std::vector<const Outcome*> live;
  for (const auto& o : ens.outcomes) {
    if (o.probability < 0.0)
      throw InvalidEnsemble("negative probability " +
                            std::to_string(o.probability));
    total += o.probability;
    if (o.probability == 0.0) continue;
    if (o.state.rows() != d || o.state.cols() != d)
      throw InvalidEnsemble("outcome states have mixed dimensions");
    if (std::abs(o.state.trace() - Complex(1, 0)) > 1e-8)
      throw InvalidEnsemble("outcome state is not unit trace");
    if ((o.state - o.state.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
      throw InvalidEnsemble("outcome state is not Hermitian");
    live.push_back(&o);
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidEnsemble("probabilities sum to " + std::to_string(total));
  return live;
}

double checked_log(double value, const char* what) {
  if (!(value > 0.0))
    throw NonPositivePurity(std::string(what) + " = " +
                            std::to_string(value));
  return -std::log(value);
}

}  // namespace

double s_total(const OutcomeEnsemble& ens) {
  const auto live = live_outcomes(ens);
  Matrix mix = Matrix::Zero(live.front()->state.rows(),
                            live.front()->state.cols());
  for (const Outcome* o : live) mix += o->probability * o->state;
  return checked_log(purity(mix), "Tr(rho_mix^2)");
}

double s_new(const OutcomeEnsemble& ens) {
  const auto live = live_outcomes(ens);
  double p2 = 0.0;
  for (const Outcome* o : live) p2 += o->probability * o->probability;
  double avg = 0.0;
  for (const Outcome* o : live)
    avg += (o->probability * o->probability / p2) * purity(o->state);
  return checked_log(avg, "weighted purity");
}

double s_old(const OutcomeEnsemble& ens) {
  const auto live = live_outcomes(ens);
  double acc = 0.0;
  for (const Outcome* o : live)
    acc += o->probability * checked_log(purity(o->state), "Tr(rho_c^2)");
  return acc;
}

}  // namespace mipt
