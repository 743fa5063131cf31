#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mipt/types.hpp"

namespace mipt {

/// Fixed-number sector of a hard-core boson chain.
///
/// A basis state is an occupation bitstring of length n_sites with Hamming
/// weight n_bosons. Site 1 is the leftmost character of the pattern and is
/// stored as the most significant bit, so ascending integer order equals
/// lexicographic order on the patterns and indices are reproducible.
struct FockBasis {
  int n_sites = 0;
  int n_bosons = 0;
  std::vector<std::uint32_t> states;  // ascending
  std::vector<std::int32_t> index;    // size 2^n_sites, -1 outside the sector

  int dim() const { return static_cast<int>(states.size()); }
  std::uint32_t state(int i) const { return states[static_cast<size_t>(i)]; }

  /// Basis index of an occupation word, or -1 if it lies outside the sector.
  int index_of(std::uint32_t word) const { return index[word]; }

  /// Bit position of a 1-based site label.
  int bit_of(int site) const { return n_sites - site; }
  bool occupied(std::uint32_t word, int site) const {
    return (word >> bit_of(site)) & 1u;
  }

  /// Occupations of the first `prefix_len` sites, packed with site 1 as the
  /// most significant bit of the result.
  std::uint32_t prefix_part(std::uint32_t word, int prefix_len) const {
    return word >> (n_sites - prefix_len);
  }
  /// Occupations of the remaining n_sites - prefix_len sites.
  std::uint32_t suffix_part(std::uint32_t word, int prefix_len) const {
    return word & ((1u << (n_sites - prefix_len)) - 1u);
  }
  std::uint32_t compose(std::uint32_t prefix, std::uint32_t suffix,
                        int prefix_len) const {
    return (prefix << (n_sites - prefix_len)) | suffix;
  }

  std::string pattern_of(std::uint32_t word) const;
};

enum class Boundary { open, periodic };

struct HamiltonianParams {
  double j_hop = 1.0;  // nearest-neighbor hopping J
  double u_int = 1.0;  // nearest-neighbor interaction U
  Boundary boundary = Boundary::open;
};

struct JumpLabel {
  int site = 0;     // 1-based
  int outcome = 0;  // 1 = occupied projector, 0 = empty projector
};

/// Ordered set of quantum jump operators with their (site, outcome) labels.
struct JumpOperatorSet {
  std::vector<Matrix> ops;
  std::vector<JumpLabel> labels;

  int size() const { return static_cast<int>(ops.size()); }
  int dim() const { return ops.empty() ? 0 : static_cast<int>(ops[0].rows()); }

  /// max |sum_a L_a^+ L_a - I|; zero for a complete measurement basis.
  double completeness_defect() const;
  bool is_complete(double tolerance = tol::completeness) const {
    return completeness_defect() <= tolerance;
  }

  /// True when every operator is diagonal with real entries (site-number
  /// projectors are). Enables the elementwise dissipator paths.
  bool diagonal_real() const;
  /// Diagonal of op a as a real vector; only valid when diagonal_real().
  RealVector real_diagonal(int a) const;
};

/// All occupation words of n_sites with exactly n_bosons set, ascending.
FockBasis build_basis(int n_sites, int n_bosons);

/// H = -J sum_<i,j> (b_i^+ b_j + b_j^+ b_i) + U sum_<i,j> n_i n_j restricted
/// to the fixed-number sector. <i,j> runs over nearest-neighbor bonds; the
/// periodic wrap bond is added only for n_sites >= 3 (a 2-site ring would
/// duplicate the single bond).
Matrix build_hamiltonian(const FockBasis& basis, const HamiltonianParams& p);

/// Site-resolved number measurement: L_{i,1} = n_i / sqrt(L) and
/// L_{i,0} = (1 - n_i) / sqrt(L) with L = n_sites, for i = 1..n_sites.
/// Hard-core occupations square to themselves, so the set is complete.
/// Order is site-major with outcome 1 first, so retaining the first m
/// channels post-selects "occupied" outcomes of the leading sites.
JumpOperatorSet build_jump_operators(const FockBasis& basis);

/// Unit vector for a product state written as an occupation pattern,
/// character k giving the occupation of site k.
Vector parse_product_state(std::string_view pattern, const FockBasis& basis);

}  // namespace mipt
