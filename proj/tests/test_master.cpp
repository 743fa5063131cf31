#include <doctest.h>

#include <cmath>

#include "mipt/errors.hpp"
#include "mipt/master.hpp"
#include "support/oracles.hpp"

using namespace mipt;

namespace {

struct TwoSite {
  FockBasis basis = build_basis(2, 1);
  Matrix h = build_hamiltonian(basis, {.j_hop = 1.0, .u_int = 1.0});
  JumpOperatorSet jumps = build_jump_operators(basis);
};

}  // namespace

TEST_CASE("rhs_complete limits") {
  TwoSite sys;
  Rng rng(42);
  const Matrix rho = testing::random_density(2, rng);

  // gamma = 0 is the pure commutator
  const Matrix unitary = rhs_complete(sys.h, sys.jumps, 0.0, rho);
  const Matrix comm = Complex(0, -1) * (sys.h * rho - rho * sys.h);
  CHECK((unitary - comm).cwiseAbs().maxCoeff() <= 1e-15);

  // maximally mixed state is stationary: commutator vanishes and the
  // diagonal projectors commute with I/d
  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  CHECK(rhs_complete(sys.h, sys.jumps, 1.0, mixed).cwiseAbs().maxCoeff() <=
        1e-15);

  // trace-free derivative on a projective initial state
  const Vector psi = parse_product_state("01", sys.basis);
  const Matrix proj = psi * psi.adjoint();
  CHECK(std::abs(rhs_complete(sys.h, sys.jumps, 1.0, proj).trace()) <= 1e-14);

  // Hermitian output for Hermitian input
  const Matrix d = rhs_complete(sys.h, sys.jumps, 1.7, rho);
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("post-selected equation reduces to the complete one at m = n") {
  const auto basis = build_basis(4, 2);
  const Matrix h = build_hamiltonian(basis, {.j_hop = 1.0, .u_int = 1.0});
  const auto jumps = build_jump_operators(basis);
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix rho = testing::random_density(basis.dim(), rng);
    const Matrix a = rhs_complete(h, jumps, 1.3, rho);
    const Matrix b = rhs_postselected(h, jumps, jumps.size(), 1.3, rho);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("post-selected equation: gamma = 0 and vanishing denominator") {
  TwoSite sys;
  Rng rng(3);
  const Matrix rho = testing::random_density(2, rng);
  const Matrix unitary = rhs_postselected(sys.h, sys.jumps, 0, 0.0, rho);
  const Matrix comm = Complex(0, -1) * (sys.h * rho - rho * sys.h);
  CHECK((unitary - comm).cwiseAbs().maxCoeff() <= 1e-15);

  // keeping only L_{1,1} but starting with site 1 empty: the retained record
  // has zero weight
  const Vector psi = parse_product_state("01", sys.basis);
  const Matrix proj = psi * psi.adjoint();
  CHECK_THROWS_AS(rhs_postselected(sys.h, sys.jumps, 1, 1.0, proj),
                  DenominatorVanished);
}

TEST_CASE("rk4_step basics and order") {
  TwoSite sys;
  auto zero_rhs = [](const Matrix& m) { return Matrix::Zero(m.rows(), m.cols()).eval(); };
  Rng rng(11);
  const Matrix rho = testing::random_density(2, rng);
  CHECK((rk4_step(zero_rhs, rho, 0.1) - rho).cwiseAbs().maxCoeff() == 0.0);

  // dephasing-free rotation: H = diag(0, w) rotates rho_01 by e^{+i w dt}
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = Complex(1.0, 0);
  auto rhs = [&](const Matrix& m) {
    return (Complex(0, -1) * (h * m - m * h)).eval();
  };
  auto one_step_error = [&](double dt) {
    const Matrix out = rk4_step(rhs, rho, dt);
    const Complex exact = rho(0, 1) * std::exp(Complex(0, dt));
    return std::abs(out(0, 1) - exact);
  };
  const double e1 = one_step_error(0.1);
  const double e2 = one_step_error(0.2);
  CHECK(e1 <= 1e-7);
  CHECK(e2 / e1 >= 25.0);
  CHECK(e2 / e1 <= 40.0);

  // one dissipative step preserves the trace to rounding (stages are
  // traceless)
  auto full = [&](const Matrix& m) {
    return rhs_complete(sys.h, sys.jumps, 2.0, m);
  };
  const Matrix stepped = rk4_step(full, rho, 1e-2);
  CHECK(std::abs(stepped.trace() - Complex(1, 0)) <= 1e-13);
}

TEST_CASE("evolve against the spectral propagator at gamma = 0") {
  for (const auto [n, k] : {std::pair{2, 1}, {4, 2}}) {
    const auto basis = build_basis(n, k);
    const Matrix h = build_hamiltonian(basis, {.j_hop = 1.0, .u_int = 1.0});
    const auto jumps = build_jump_operators(basis);
    Rng rng(5);
    const Matrix rho0 = testing::random_density(basis.dim(), rng);

    EvolutionConfig cfg;
    cfg.t_total = 10.0;
    cfg.n_steps = 4000;
    cfg.measurement_rate = 0.0;
    cfg.check_every = 1000;
    const auto result = evolve(h, jumps, cfg, rho0);

    const Matrix u = testing::propagator(h, 10.0);
    const Matrix expected = u * rho0 * u.adjoint();
    CHECK((result.states.back() - expected).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("evolve keeps the trace and loses purity under measurement") {
  const auto basis = build_basis(4, 2);
  const Matrix h = build_hamiltonian(basis, {.j_hop = 1.0, .u_int = 1.0});
  const auto jumps = build_jump_operators(basis);
  const Vector psi = parse_product_state("0011", basis);
  const Matrix rho0 = psi * psi.adjoint();

  EvolutionConfig cfg;
  cfg.t_total = 30.0;
  cfg.n_steps = 11000;
  cfg.measurement_rate = 5.0;
  cfg.check_every = 500;
  const auto result = evolve(h, jumps, cfg, rho0);  // throws if invariants fail
  for (const auto& rho : result.states)
    CHECK(std::abs(rho.trace() - Complex(1, 0)) <= 1e-8);

  // global purity decreases monotonically for Hermitian jump operators
  double prev = 1.0 + 1e-12;
  for (const auto& rho : result.states) {
    const double p = purity(rho);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  CHECK(purity(result.states.back()) < 0.99);
}

TEST_CASE("partial trace on known states") {
  const auto b63 = build_basis(6, 3);
  const Vector psi = parse_product_state("000111", b63);
  const Matrix rho = psi * psi.adjoint();
  const Matrix reduced = partial_trace(rho, b63, {3});
  CHECK(reduced.rows() == 8);
  CHECK(std::abs(reduced(0, 0) - Complex(1, 0)) <= 1e-15);  // |000><000|
  CHECK(std::abs(purity(reduced) - 1.0) <= 1e-14);

  const auto b21 = build_basis(2, 1);
  Vector bell(2);
  bell << Complex(1, 0), Complex(1, 0);
  bell /= std::sqrt(2.0);
  const Matrix bell_reduced =
      partial_trace(bell * bell.adjoint(), b21, {1});
  CHECK(std::abs(bell_reduced(0, 0) - Complex(0.5, 0)) <= 1e-15);
  CHECK(std::abs(bell_reduced(1, 1) - Complex(0.5, 0)) <= 1e-15);
  CHECK(std::abs(bell_reduced(0, 1)) <= 1e-15);
  CHECK(std::abs(purity(bell_reduced) - 0.5) <= 1e-14);

  const Matrix mixed_reduced =
      partial_trace(Matrix::Identity(2, 2) / 2.0, b21, {1});
  CHECK(std::abs(mixed_reduced(0, 0) - Complex(0.5, 0)) <= 1e-15);
  CHECK(std::abs(mixed_reduced(1, 1) - Complex(0.5, 0)) <= 1e-15);
}

TEST_CASE("partial trace preserves the trace and complement entropies agree") {
  const auto basis = build_basis(4, 2);
  Rng rng(9);
  const Matrix rho = testing::random_density(basis.dim(), rng);
  for (int la = 1; la <= 3; ++la) {
    CHECK(std::abs(partial_trace(rho, basis, {la}).trace() - rho.trace()) <=
          1e-12);
  }
  // pure states: S_A = S_B
  const Matrix pure = testing::random_pure_density(basis.dim(), rng);
  for (int la = 1; la <= 3; ++la) {
    const double sa = renyi2(partial_trace(pure, basis, {la}));
    const double sb = renyi2(partial_trace_complement(pure, basis, {la}));
    CHECK(std::abs(sa - sb) <= 1e-10);
  }
}

TEST_CASE("renyi2 values") {
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = Complex(1, 0);
  CHECK(std::abs(renyi2(pure)) <= 1e-14);

  Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  CHECK(std::abs(renyi2(mixed) - std::log(2.0)) <= 1e-14);

  Matrix tilted = Matrix::Zero(2, 2);
  tilted(0, 0) = Complex(0.75, 0);
  tilted(1, 1) = Complex(0.25, 0);
  CHECK(std::abs(renyi2(tilted) + std::log(5.0 / 8.0)) <= 1e-14);

  CHECK_THROWS_AS(renyi2(Matrix::Zero(2, 2)), NonPositivePurity);
}

TEST_CASE("saturation helpers") {
  std::vector<double> series;
  for (int i = 1; i <= 20; ++i) series.push_back(i);
  CHECK(saturation_value(series) == doctest::Approx(19.5));
  // tail {19, 20}: sample sd sqrt(0.5), stderr sqrt(0.5)/sqrt(2) = 0.5
  CHECK(saturation_stderr(series) == doctest::Approx(0.5));
}
