#include <doctest.h>

#include <cmath>
#include <limits>

#include "mipt/entropy.hpp"
#include "mipt/errors.hpp"
#include "mipt/master.hpp"
#include "support/oracles.hpp"

using namespace mipt;

namespace {

Matrix basis_projector(int d, int k) {
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = Complex(1, 0);
  return m;
}

// outcomes supported on orthogonal blocks of a randomly rotated space
OutcomeEnsemble random_orthogonal_ensemble(int n_outcomes, int block, Rng& rng) {
  const int d = n_outcomes * block;
  // random unitary from the QR factorization of a Gaussian matrix
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    g.col(j) = testing::random_state(d, rng) * std::sqrt(d);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();

  std::vector<double> p(n_outcomes);
  double total = 0.0;
  for (auto& x : p) {
    x = rng.uniform() + 1e-3;
    total += x;
  }
  for (auto& x : p) x /= total;

  OutcomeEnsemble ens;
  for (int c = 0; c < n_outcomes; ++c) {
    Matrix blockstate = Matrix::Zero(d, d);
    blockstate.block(c * block, c * block, block, block) =
        testing::random_density(block, rng);
    ens.outcomes.push_back({p[c], q * blockstate * q.adjoint()});
  }
  return ens;
}

}  // namespace

TEST_CASE("worked example: equal mixture of orthogonal pure states") {
  OutcomeEnsemble ens;
  ens.outcomes.push_back({0.5, basis_projector(2, 0)});
  ens.outcomes.push_back({0.5, basis_projector(2, 1)});
  CHECK(std::abs(s_total(ens) - std::log(2.0)) <= 1e-14);
  CHECK(std::abs(s_new(ens)) <= 1e-14);
  CHECK(std::abs(s_old(ens)) <= 1e-14);
}

TEST_CASE("degenerate and single-outcome ensembles") {
  OutcomeEnsemble same;
  same.outcomes.push_back({0.5, basis_projector(2, 0)});
  same.outcomes.push_back({0.5, basis_projector(2, 0)});
  CHECK(std::abs(s_total(same)) <= 1e-14);  // overlap 1

  OutcomeEnsemble single;
  single.outcomes.push_back({1.0, Matrix::Identity(3, 3) / 3.0});
  CHECK(std::abs(s_new(single) - std::log(3.0)) <= 1e-14);
  CHECK(std::abs(s_total(single) - std::log(3.0)) <= 1e-14);
}

TEST_CASE("s_new with mixed purities") {
  OutcomeEnsemble ens;
  ens.outcomes.push_back({0.5, basis_projector(2, 0)});       // purity 1
  ens.outcomes.push_back({0.5, Matrix::Identity(2, 2) / 2.0}); // purity 1/2
  CHECK(std::abs(s_new(ens) + std::log(0.75)) <= 1e-14);
}

TEST_CASE("s_old examples") {
  // equal probabilities and purities: s_old == s_new == -ln a
  OutcomeEnsemble ens;
  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  for (int c = 0; c < 4; ++c) ens.outcomes.push_back({0.25, mixed});
  CHECK(std::abs(s_old(ens) - std::log(2.0)) <= 1e-12);
  CHECK(std::abs(s_old(ens) - s_new(ens)) <= 1e-12);

  // two outcomes with purities 1 and exp(-1): s_old = 1/2
  const double ab = (0.25 - 0.5 * std::exp(-1.0)) / 2.0;
  const double split = std::sqrt(0.25 - 4.0 * ab);
  const double hi = (0.5 + split) / 2.0;
  const double lo = (0.5 - split) / 2.0;
  Matrix quarter = Matrix::Zero(4, 4);
  quarter(0, 0) = quarter(1, 1) = Complex(hi, 0);
  quarter(2, 2) = quarter(3, 3) = Complex(lo, 0);
  REQUIRE(std::abs(purity(quarter) - std::exp(-1.0)) <= 1e-12);
  OutcomeEnsemble pair;
  pair.outcomes.push_back({0.5, basis_projector(4, 0)});
  pair.outcomes.push_back({0.5, quarter});
  CHECK(std::abs(s_old(pair) - 0.5) <= 1e-12);
}

TEST_CASE("pure ensembles carry only record entropy") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    OutcomeEnsemble ens;
    const int n = 3;
    double total = 0.0;
    std::vector<double> p(n);
    for (auto& x : p) {
      x = rng.uniform() + 0.1;
      total += x;
    }
    for (int c = 0; c < n; ++c)
      ens.outcomes.push_back({p[c] / total, testing::random_pure_density(4, rng)});
    CHECK(std::abs(s_new(ens)) <= 1e-10);
    CHECK(std::abs(s_old(ens)) <= 1e-10);
    CHECK(s_total(ens) > 0.0);
  }
}

TEST_CASE("orthogonal ensembles: s_total >= s_new with the exact gap") {
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 3);
    const auto ens = random_orthogonal_ensemble(n, 2, rng);
    const double total = s_total(ens);
    const double fresh = s_new(ens);
    CHECK(total >= fresh - 1e-12);
    double p2 = 0.0;
    for (const auto& o : ens.outcomes) p2 += o.probability * o.probability;
    // for orthogonal supports the gap is exactly -ln sum p^2
    CHECK(std::abs((total - fresh) + std::log(p2)) <= 1e-10);
    if (p2 < 0.99) CHECK(total - fresh > 1e-6);
  }

  // equality at a degenerate record
  OutcomeEnsemble lone;
  lone.outcomes.push_back({1.0, basis_projector(2, 0)});
  CHECK(std::abs(s_total(lone) - s_new(lone)) <= 1e-14);
}

TEST_CASE("zero-probability outcomes are ignored") {
  OutcomeEnsemble ens;
  ens.outcomes.push_back({1.0, basis_projector(2, 0)});
  ens.outcomes.push_back({0.0, Matrix::Zero(5, 5)});  // not even unit trace
  CHECK(std::abs(s_total(ens)) <= 1e-14);
  CHECK(std::abs(s_new(ens)) <= 1e-14);
}

TEST_CASE("ensemble validation") {
  OutcomeEnsemble negative;
  negative.outcomes.push_back({-0.1, basis_projector(2, 0)});
  negative.outcomes.push_back({1.1, basis_projector(2, 1)});
  CHECK_THROWS_AS(s_total(negative), InvalidEnsemble);

  OutcomeEnsemble unnormalized;
  unnormalized.outcomes.push_back({0.7, basis_projector(2, 0)});
  CHECK_THROWS_AS(s_new(unnormalized), InvalidEnsemble);

  OutcomeEnsemble crooked;
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = Complex(1, 0);
  skew(0, 0) = Complex(1, 0);
  crooked.outcomes.push_back({1.0, skew});
  CHECK_THROWS_AS(s_old(crooked), InvalidEnsemble);

  OutcomeEnsemble mixed_dims;
  mixed_dims.outcomes.push_back({0.5, basis_projector(2, 0)});
  mixed_dims.outcomes.push_back({0.5, basis_projector(3, 0)});
  CHECK_THROWS_AS(s_total(mixed_dims), InvalidEnsemble);

  // NaN slips through the tolerance checks but is caught at the purity
  OutcomeEnsemble corrupt;
  Matrix bad = Matrix::Identity(2, 2) / 2.0;
  bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
  corrupt.outcomes.push_back({1.0, bad});
  CHECK_THROWS_AS(s_total(corrupt), NonPositivePurity);
}
