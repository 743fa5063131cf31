#include <doctest.h>

#include "mipt/errors.hpp"
#include "mipt/fock.hpp"
#include "support/oracles.hpp"

using namespace mipt;

namespace {

long binomial(int n, int k) {
  long out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

}  // namespace

TEST_CASE("basis enumeration") {
  const auto b21 = build_basis(2, 1);
  CHECK(b21.dim() == 2);
  CHECK(b21.pattern_of(b21.state(0)) == "01");
  CHECK(b21.pattern_of(b21.state(1)) == "10");

  CHECK(build_basis(6, 3).dim() == 20);

  const auto b40 = build_basis(4, 0);
  CHECK(b40.dim() == 1);
  CHECK(b40.pattern_of(b40.state(0)) == "0000");
}

TEST_CASE("basis dimension is binomial and ordering deterministic") {
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto basis = build_basis(n, k);
      CHECK(basis.dim() == binomial(n, k));
      const auto again = build_basis(n, k);
      CHECK(basis.states == again.states);
      for (int i = 0; i < basis.dim(); ++i) {
        CHECK(basis.index_of(basis.state(i)) == i);
        if (i > 0) CHECK(basis.state(i - 1) < basis.state(i));
      }
    }
}

TEST_CASE("invalid fillings are rejected") {
  CHECK_THROWS_AS(build_basis(2, 3), InvalidFilling);
  CHECK_THROWS_AS(build_basis(3, -1), InvalidFilling);
  CHECK_THROWS_AS(build_basis(0, 0), InvalidFilling);
}

TEST_CASE("two-site Hamiltonians by hand") {
  // one boson on two sites: pure hopping between |01> and |10>
  const auto b21 = build_basis(2, 1);
  const Matrix h = build_hamiltonian(b21, {.j_hop = 1.0, .u_int = 1.0});
  CHECK(std::abs(h(0, 0)) == 0.0);
  CHECK(std::abs(h(1, 1)) == 0.0);
  CHECK(std::abs(h(0, 1) - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(h(1, 0) - Complex(-1, 0)) < 1e-15);

  // two bosons on two sites: hopping blocked, only the interaction survives
  const auto b22 = build_basis(2, 2);
  const Matrix h22 = build_hamiltonian(b22, {.j_hop = 1.0, .u_int = 1.0});
  CHECK(h22.rows() == 1);
  CHECK(std::abs(h22(0, 0) - Complex(1, 0)) < 1e-15);

  const Matrix zero = build_hamiltonian(b21, {.j_hop = 0.0, .u_int = 0.0});
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Hamiltonian is Hermitian") {
  for (const auto boundary : {Boundary::open, Boundary::periodic}) {
    const auto basis = build_basis(6, 3);
    const Matrix h = build_hamiltonian(
        basis, {.j_hop = 0.7, .u_int = 1.3, .boundary = boundary});
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("sector Hamiltonian matches the full-space construction") {
  for (const auto boundary : {Boundary::open, Boundary::periodic}) {
    for (const auto [n, k] : {std::pair{3, 1}, {3, 2}, {4, 2}}) {
      const auto basis = build_basis(n, k);
      const Matrix h = build_hamiltonian(
          basis, {.j_hop = 0.7, .u_int = 1.3, .boundary = boundary});
      const Matrix full =
          testing::full_space_hamiltonian(n, 0.7, 1.3, boundary);
      for (int a = 0; a < basis.dim(); ++a)
        for (int b = 0; b < basis.dim(); ++b)
          CHECK(std::abs(h(a, b) - full(basis.state(a), basis.state(b))) <=
                1e-13);
      // particle number is conserved
      const Matrix number = testing::full_space_number(n);
      CHECK((full * number - number * full).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("jump operators: labels, values, completeness") {
  const auto b21 = build_basis(2, 1);
  const auto set = build_jump_operators(b21);
  REQUIRE(set.size() == 4);
  CHECK(set.labels[0].site == 1);
  CHECK(set.labels[0].outcome == 1);
  CHECK(set.labels[1].site == 1);
  CHECK(set.labels[1].outcome == 0);

  // L_{1,1} projects "site 1 occupied": only |10> survives, weight 1/sqrt(2)
  const Matrix& l11 = set.ops[0];
  CHECK(std::abs(l11(0, 0)) == 0.0);
  CHECK(std::abs(l11(1, 1) - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(set.diagonal_real());

  for (const auto [n, k] : {std::pair{1, 1}, {2, 1}, {4, 2}, {6, 3}}) {
    const auto basis = build_basis(n, k);
    const auto jumps = build_jump_operators(basis);
    CHECK(jumps.size() == 2 * n);
    CHECK(jumps.completeness_defect() <= 1e-12);
  }

  const auto b11 = build_basis(1, 1);
  const auto single = build_jump_operators(b11);
  CHECK(std::abs(single.ops[0](0, 0) - Complex(1, 0)) < 1e-15);  // L_{1,1}
  CHECK(std::abs(single.ops[1](0, 0)) == 0.0);                   // L_{1,0}
}

TEST_CASE("product-state parsing") {
  const auto b63 = build_basis(6, 3);
  const Vector v = parse_product_state("000111", b63);
  CHECK(v.size() == 20);
  CHECK(std::abs(v.norm() - 1.0) < 1e-15);
  const int idx = b63.index_of(0b000111);
  CHECK(std::abs(v(idx) - Complex(1, 0)) < 1e-15);

  const auto b21 = build_basis(2, 1);
  const Vector w = parse_product_state("01", b21);
  CHECK(std::abs(w(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(w(1)) == 0.0);

  CHECK_THROWS_AS(parse_product_state("111", build_basis(3, 2)),
                  PatternMismatch);
  CHECK_THROWS_AS(parse_product_state("0011", b21), PatternMismatch);
  CHECK_THROWS_AS(parse_product_state("0x", b21), PatternMismatch);
}
