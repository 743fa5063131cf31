#include "mipt/fock.hpp"

#include <bit>
#include <utility>

#include "mipt/errors.hpp"

namespace mipt {

namespace {

// index table is 2^n_sites entries; 20 sites (1M) is already far beyond the
// dense-matrix regime this code targets.
constexpr int kMaxSites = 20;

std::vector<std::pair<int, int>> bonds(int n_sites, Boundary boundary) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i < n_sites; ++i) out.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic && n_sites >= 3)
    out.emplace_back(n_sites, 1);
  return out;
}

}  // namespace

std::string FockBasis::pattern_of(std::uint32_t word) const {
  std::string s(static_cast<size_t>(n_sites), '0');
  for (int site = 1; site <= n_sites; ++site)
    if (occupied(word, site)) s[static_cast<size_t>(site - 1)] = '1';
  return s;
}

double JumpOperatorSet::completeness_defect() const {
  if (ops.empty()) return 1.0;
  Matrix sum = Matrix::Zero(dim(), dim());
  for (const auto& l : ops) sum += l.adjoint() * l;
  sum -= Matrix::Identity(dim(), dim());
  return sum.cwiseAbs().maxCoeff();
}

bool JumpOperatorSet::diagonal_real() const {
  for (const auto& l : ops) {
    for (int c = 0; c < l.cols(); ++c)
      for (int r = 0; r < l.rows(); ++r) {
        if (r != c && l(r, c) != Complex(0, 0)) return false;
        if (r == c && l(r, c).imag() != 0.0) return false;
      }
  }
  return true;
}

RealVector JumpOperatorSet::real_diagonal(int a) const {
  return ops[static_cast<size_t>(a)].diagonal().real();
}

FockBasis build_basis(int n_sites, int n_bosons) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw InvalidFilling("n_sites must be in [1, " +
                         std::to_string(kMaxSites) + "], got " +
                         std::to_string(n_sites));
  if (n_bosons < 0 || n_bosons > n_sites)
    throw InvalidFilling("n_bosons must be in [0, n_sites], got " +
                         std::to_string(n_bosons) + " for n_sites = " +
                         std::to_string(n_sites));

  FockBasis basis;
  basis.n_sites = n_sites;
  basis.n_bosons = n_bosons;
  const std::uint32_t total = 1u << n_sites;
  basis.index.assign(total, -1);
  for (std::uint32_t word = 0; word < total; ++word) {
    if (std::popcount(word) == n_bosons) {
      basis.index[word] = static_cast<std::int32_t>(basis.states.size());
      basis.states.push_back(word);
    }
  }
  return basis;
}

Matrix build_hamiltonian(const FockBasis& basis, const HamiltonianParams& p) {
  const int d = basis.dim();
  Matrix h = Matrix::Zero(d, d);
  const auto bond_list = bonds(basis.n_sites, p.boundary);
  for (int k = 0; k < d; ++k) {
    const std::uint32_t s = basis.state(k);
    double diag = 0.0;
    for (const auto& [i, j] : bond_list) {
      const bool ni = basis.occupied(s, i);
      const bool nj = basis.occupied(s, j);
      if (ni && nj) diag += p.u_int;
      if (ni != nj) {
        // hard-core hop: the boson crosses the bond, b_i^+ b_j or b_j^+ b_i
        const std::uint32_t flipped =
            s ^ ((1u << basis.bit_of(i)) | (1u << basis.bit_of(j)));
        h(basis.index_of(flipped), k) += -p.j_hop;
      }
    }
    h(k, k) += diag;
  }
  return h;
}

JumpOperatorSet build_jump_operators(const FockBasis& basis) {
  const int d = basis.dim();
  const double norm = 1.0 / std::sqrt(static_cast<double>(basis.n_sites));
  JumpOperatorSet set;
  set.ops.reserve(static_cast<size_t>(2 * basis.n_sites));
  for (int site = 1; site <= basis.n_sites; ++site) {
    for (int outcome : {1, 0}) {
      Matrix l = Matrix::Zero(d, d);
      for (int k = 0; k < d; ++k) {
        const bool occ = basis.occupied(basis.state(k), site);
        if ((outcome == 1) == occ) l(k, k) = norm;
      }
      set.ops.push_back(std::move(l));
      set.labels.push_back({site, outcome});
    }
  }
  return set;
}

Vector parse_product_state(std::string_view pattern, const FockBasis& basis) {
  if (static_cast<int>(pattern.size()) != basis.n_sites)
    throw PatternMismatch("pattern length " + std::to_string(pattern.size()) +
                          " does not match n_sites = " +
                          std::to_string(basis.n_sites));
  std::uint32_t word = 0;
  int weight = 0;
  for (char c : pattern) {
    if (c != '0' && c != '1')
      throw PatternMismatch("pattern may contain only '0' and '1'");
    word = (word << 1) | static_cast<std::uint32_t>(c == '1');
    weight += (c == '1');
  }
  if (weight != basis.n_bosons)
    throw PatternMismatch("pattern weight " + std::to_string(weight) +
                          " does not match n_bosons = " +
                          std::to_string(basis.n_bosons));
  Vector v = Vector::Zero(basis.dim());
  v(basis.index_of(word)) = Complex(1, 0);
  return v;
}

}  // namespace mipt
