#pragma once

#include <cstdint>
#include <vector>

#include "cubical/base.hpp"

namespace cubical::lattice {

// Column vectors over the integers; a Mat is a list of columns of one length.
using Vec = std::vector<std::int64_t>;
using Mat = std::vector<Vec>;

// Canonical column-echelon basis: pivot rows strictly ascending, pivots
// positive, and the pivot-row entry of every earlier column reduced into
// [0, pivot). Two generating sets span the same subgroup of Z^d exactly when
// their canonical bases are equal.
Mat hermite_basis(std::size_t d, const Mat& gens);

// Subgroup of Z^d held by its canonical basis.
struct LatticeSubgroup {
  std::size_t d = 0;
  Mat basis;

  static LatticeSubgroup span(std::size_t d, const Mat& gens);
  std::size_t rank() const { return basis.size(); }
  bool operator==(const LatticeSubgroup& o) const = default;
};

bool contains(const LatticeSubgroup& l, const Vec& v);
bool is_sublattice(const LatticeSubgroup& inner, const LatticeSubgroup& outer);
LatticeSubgroup sum(const LatticeSubgroup& a, const LatticeSubgroup& b);
LatticeSubgroup intersect(const LatticeSubgroup& a, const LatticeSubgroup& b);

// Canonical basis of { c in Z^n : sum_j c_j cols[j] = 0 }.
Mat integer_kernel(std::size_t rows, const Mat& cols);

// u * m * v = d with u, v unimodular; diag holds the elementary divisors,
// nonnegative with each dividing the next, padded with zeros to
// min(rows, cols). u is rows x rows, v is cols x cols, u_inv = u^-1.
struct Smith {
  Mat u, u_inv, v;
  Vec diag;
};
Smith smith_normal_form(std::size_t rows, const Mat& cols);

// [Z^d : L]; 0 when the index is infinite.
std::uint64_t ambient_index(const LatticeSubgroup& l);
// [outer : inner]; 0 when infinite. Requires inner to be a sublattice.
std::uint64_t index_in(const LatticeSubgroup& inner, const LatticeSubgroup& outer);

// Common finite-index refinement of independent subgroups A_i of Z^d: a
// finite-index A' with A_i cap A' = A'_i and (A' + A_i) cap (A' + A_j) = A'
// for i != j. When the A_i admit a nonzero combination summing to zero the
// result instead carries one such witness, one member per input.
struct AbelianCommand {
  bool ok = false;
  LatticeSubgroup aprime;
  std::uint64_t index = 0;
  Mat witness;
};
AbelianCommand abelian_command(std::size_t d, const std::vector<LatticeSubgroup>& a,
                               const std::vector<LatticeSubgroup>& aprime);

}  // namespace cubical::lattice
