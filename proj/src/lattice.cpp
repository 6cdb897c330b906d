#include "cubical/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

namespace cubical::lattice {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw StructuralError("lattice arithmetic overflow");
  return (std::int64_t)v;
}

std::int64_t cmul(std::int64_t a, std::int64_t b) { return checked((__int128)a * b); }

// target += c * src
void axpy(Vec& target, std::int64_t c, const Vec& src) {
  for (std::size_t r = 0; r < target.size(); ++r)
    target[r] = checked((__int128)target[r] + (__int128)c * src[r]);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// g = gcd(a, b) > 0 with x a + y b = g; a, b not both zero.
void egcd(std::int64_t a, std::int64_t b, std::int64_t& g, std::int64_t& x, std::int64_t& y) {
  std::int64_t r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r = r0 - cmul(q, r1), xn = x0 - cmul(q, x1), yn = y0 - cmul(q, y1);
    r0 = r1, r1 = r, x0 = x1, x1 = xn, y0 = y1, y1 = yn;
  }
  g = r0, x = x0, y = y0;
  if (g < 0) g = -g, x = -x, y = -y;
}

bool is_zero(const Vec& v) {
  for (std::int64_t x : v)
    if (x != 0) return false;
  return true;
}

std::size_t pivot_row(const Vec& v) {
  for (std::size_t r = 0; r < v.size(); ++r)
    if (v[r] != 0) return r;
  return v.size();
}

// Column echelon with pivots restricted to the first pivot_rows rows. Pivoted
// columns come back canonical in `basis`; columns zero on the pivot range come
// back in `leftover`.
void echelonize(std::size_t pivot_rows, Mat cols, Mat& basis, Mat& leftover) {
  basis.clear();
  leftover.clear();
  std::vector<Vec> live;
  for (Vec& c : cols)
    if (!is_zero(c)) live.push_back(std::move(c));
  for (std::size_t r = 0; r < pivot_rows; ++r) {
    std::size_t hit = live.size();
    for (std::size_t j = 0; j < live.size(); ++j) {
      if (live[j][r] == 0) continue;
      if (hit == live.size()) {
        hit = j;
        continue;
      }
      std::int64_t g, x, y, a = live[hit][r], b = live[j][r];
      egcd(a, b, g, x, y);
      Vec keep(live[hit].size(), 0), kill(live[hit].size(), 0);
      axpy(keep, x, live[hit]);
      axpy(keep, y, live[j]);
      axpy(kill, a / g, live[j]);
      axpy(kill, -(b / g), live[hit]);
      live[hit] = std::move(keep);
      live[j] = std::move(kill);
    }
    if (hit == live.size()) continue;
    Vec piv = std::move(live[hit]);
    live.erase(live.begin() + (std::ptrdiff_t)hit);
    if (piv[r] < 0)
      for (std::int64_t& v : piv) v = -v;
    basis.push_back(std::move(piv));
  }
  // Entries of earlier columns in later pivot rows land in [0, pivot).
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      std::size_t p = pivot_row(basis[j]);
      std::int64_t q = floor_div(basis[i][p], basis[j][p]);
      if (q != 0) axpy(basis[i], -q, basis[j]);
    }
  for (Vec& c : live)
    if (!is_zero(c)) leftover.push_back(std::move(c));
}

void require_dim(const LatticeSubgroup& l, std::size_t d, const char* role) {
  if (l.d != d) throw StructuralError(std::string(role) + ": ambient dimension mismatch");
}

// Coordinates of v in the echelon basis; false when v is outside the span.
bool solve_coords(const Mat& basis, const Vec& v, Vec& coords) {
  coords.assign(basis.size(), 0);
  Vec w = v;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::size_t p = pivot_row(basis[i]);
    if (w[p] % basis[i][p] != 0) return false;
    std::int64_t q = w[p] / basis[i][p];
    coords[i] = q;
    if (q != 0) axpy(w, -q, basis[i]);
  }
  return is_zero(w);
}

struct SmithState {
  std::size_t rows, ncols;
  Mat m;  // column-major work copy
  Mat u, u_inv, v;

  std::int64_t& at(std::size_t row, std::size_t col) { return m[col][row]; }

  void row_add(std::size_t i, std::size_t j, std::int64_t c) {  // row i += c * row j
    for (Vec& col : m) col[i] = checked((__int128)col[i] + (__int128)c * col[j]);
    for (Vec& col : u) col[i] = checked((__int128)col[i] + (__int128)c * col[j]);
    axpy(u_inv[j], -c, u_inv[i]);
  }
  void row_swap(std::size_t i, std::size_t j) {
    for (Vec& col : m) std::swap(col[i], col[j]);
    for (Vec& col : u) std::swap(col[i], col[j]);
    std::swap(u_inv[i], u_inv[j]);
  }
  void row_negate(std::size_t i) {
    for (Vec& col : m) col[i] = -col[i];
    for (Vec& col : u) col[i] = -col[i];
    for (std::int64_t& x : u_inv[i]) x = -x;
  }
  void col_add(std::size_t a, std::size_t b, std::int64_t c) {  // col a += c * col b
    axpy(m[a], c, m[b]);
    axpy(v[a], c, v[b]);
  }
  void col_swap(std::size_t a, std::size_t b) {
    std::swap(m[a], m[b]);
    std::swap(v[a], v[b]);
  }
  void col_negate(std::size_t a) {
    for (std::int64_t& x : m[a]) x = -x;
    for (std::int64_t& x : v[a]) x = -x;
  }
};

Mat identity_mat(std::size_t n) {
  Mat id(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

}  // namespace

Mat hermite_basis(std::size_t d, const Mat& gens) {
  for (const Vec& g : gens)
    if (g.size() != d) throw StructuralError("hermite_basis: generator of wrong dimension");
  Mat basis, leftover;
  echelonize(d, gens, basis, leftover);
  return basis;
}

LatticeSubgroup LatticeSubgroup::span(std::size_t d, const Mat& gens) {
  LatticeSubgroup l;
  l.d = d;
  l.basis = hermite_basis(d, gens);
  return l;
}

bool contains(const LatticeSubgroup& l, const Vec& v) {
  if (v.size() != l.d) throw StructuralError("contains: vector of wrong dimension");
  Vec coords;
  return solve_coords(l.basis, v, coords);
}

bool is_sublattice(const LatticeSubgroup& inner, const LatticeSubgroup& outer) {
  require_dim(inner, outer.d, "is_sublattice");
  for (const Vec& g : inner.basis)
    if (!contains(outer, g)) return false;
  return true;
}

LatticeSubgroup sum(const LatticeSubgroup& a, const LatticeSubgroup& b) {
  require_dim(b, a.d, "sum");
  Mat gens = a.basis;
  gens.insert(gens.end(), b.basis.begin(), b.basis.end());
  return LatticeSubgroup::span(a.d, gens);
}

Mat integer_kernel(std::size_t rows, const Mat& cols) {
  std::size_t n = cols.size();
  Mat ext;
  for (std::size_t j = 0; j < n; ++j) {
    if (cols[j].size() != rows) throw StructuralError("integer_kernel: ragged matrix");
    Vec c = cols[j];
    c.resize(rows + n, 0);
    c[rows + j] = 1;
    ext.push_back(std::move(c));
  }
  Mat basis, leftover;
  echelonize(rows, std::move(ext), basis, leftover);
  Mat ker;
  for (const Vec& c : leftover) ker.push_back(Vec(c.begin() + (std::ptrdiff_t)rows, c.end()));
  return hermite_basis(n, ker);
}

LatticeSubgroup intersect(const LatticeSubgroup& a, const LatticeSubgroup& b) {
  require_dim(b, a.d, "intersect");
  Mat cols = a.basis;
  cols.insert(cols.end(), b.basis.begin(), b.basis.end());
  Mat ker = integer_kernel(a.d, cols);
  Mat gens;
  for (const Vec& c : ker) {
    Vec apart(c.begin(), c.begin() + (std::ptrdiff_t)a.basis.size());
    Vec g(a.d, 0);
    for (std::size_t j = 0; j < apart.size(); ++j) axpy(g, apart[j], a.basis[j]);
    gens.push_back(std::move(g));
  }
  return LatticeSubgroup::span(a.d, gens);
}

Smith smith_normal_form(std::size_t rows, const Mat& cols) {
  SmithState s;
  s.rows = rows;
  s.ncols = cols.size();
  s.m = cols;
  for (const Vec& c : s.m)
    if (c.size() != rows) throw StructuralError("smith_normal_form: ragged matrix");
  s.u = identity_mat(rows);
  s.u_inv = identity_mat(rows);
  s.v = identity_mat(s.ncols);

  std::size_t lim = std::min(rows, s.ncols);
  for (std::size_t t = 0; t < lim; ++t) {
    // Bring the smallest nonzero of the trailing block to (t, t).
    auto locate = [&]() -> bool {
      std::size_t bi = rows, bj = s.ncols;
      std::int64_t best = 0;
      for (std::size_t j = t; j < s.ncols; ++j)
        for (std::size_t i = t; i < rows; ++i) {
          std::int64_t v = s.at(i, j);
          if (v == 0) continue;
          if (best == 0 || std::llabs(v) < std::llabs(best)) best = v, bi = i, bj = j;
        }
      if (bi == rows) return false;
      if (bi != t) s.row_swap(t, bi);
      if (bj != t) s.col_swap(t, bj);
      return true;
    };
    if (!locate()) break;
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows && clean; ++i) {
        if (s.at(i, t) == 0) continue;
        s.row_add(i, t, -floor_div(s.at(i, t), s.at(t, t)));
        if (s.at(i, t) != 0) {
          s.row_swap(t, i);
          clean = false;
        }
      }
      if (!clean) continue;
      for (std::size_t j = t + 1; j < s.ncols && clean; ++j) {
        if (s.at(t, j) == 0) continue;
        s.col_add(j, t, -floor_div(s.at(t, j), s.at(t, t)));
        if (s.at(t, j) != 0) {
          s.col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      std::size_t ri = rows, rj = s.ncols;
      for (std::size_t j = t + 1; j < s.ncols && ri == rows; ++j)
        for (std::size_t i = t + 1; i < rows; ++i)
          if (s.at(i, j) % s.at(t, t) != 0) {
            ri = i, rj = j;
            break;
          }
      if (ri == rows) break;
      (void)rj;
      s.row_add(t, ri, 1);
    }
    if (s.at(t, t) < 0) s.col_negate(t);
  }

  Smith out;
  out.u = std::move(s.u);
  out.u_inv = std::move(s.u_inv);
  out.v = std::move(s.v);
  out.diag.assign(lim, 0);
  for (std::size_t t = 0; t < lim; ++t) out.diag[t] = s.m[t][t];
  return out;
}

std::uint64_t ambient_index(const LatticeSubgroup& l) {
  if (l.rank() < l.d) return 0;
  __int128 idx = 1;
  for (std::size_t i = 0; i < l.basis.size(); ++i) idx *= l.basis[i][pivot_row(l.basis[i])];
  return (std::uint64_t)checked(idx);
}

std::uint64_t index_in(const LatticeSubgroup& inner, const LatticeSubgroup& outer) {
  if (!is_sublattice(inner, outer)) throw StructuralError("index_in: not a sublattice");
  if (inner.rank() < outer.rank()) return 0;
  Mat coords;
  for (const Vec& g : inner.basis) {
    Vec c;
    if (!solve_coords(outer.basis, g, c))
      throw StructuralError("index_in: coordinate solve failed");
    coords.push_back(std::move(c));
  }
  Smith s = smith_normal_form(outer.rank(), coords);
  __int128 idx = 1;
  for (std::int64_t v : s.diag) idx *= v < 0 ? -v : v;
  return (std::uint64_t)checked(idx);
}

AbelianCommand abelian_command(std::size_t d, const std::vector<LatticeSubgroup>& a,
                               const std::vector<LatticeSubgroup>& aprime) {
  if (a.empty() || a.size() != aprime.size())
    throw StructuralError("abelian_command: need matching nonempty subgroup lists");
  for (std::size_t i = 0; i < a.size(); ++i) {
    require_dim(a[i], d, "abelian_command");
    require_dim(aprime[i], d, "abelian_command");
    if (!is_sublattice(aprime[i], a[i]))
      throw StructuralError("abelian_command: input " + std::to_string(i) +
                            " is not a sublattice of its group");
    if (aprime[i].rank() != a[i].rank())
      throw StructuralError("abelian_command: input " + std::to_string(i) +
                            " has infinite index in its group");
  }

  // Independence: no nonzero member-per-group combination sums to zero.
  Mat stacked;
  std::vector<std::size_t> block_of;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const Vec& g : a[i].basis) {
      stacked.push_back(g);
      block_of.push_back(i);
    }
  Mat ker = integer_kernel(d, stacked);
  if (!ker.empty()) {
    AbelianCommand fail;
    fail.witness.assign(a.size(), Vec(d, 0));
    for (std::size_t j = 0; j < stacked.size(); ++j)
      axpy(fail.witness[block_of[j]], ker[0][j], stacked[j]);
    return fail;
  }

  // B is the joint sublattice; a complement of the free part of Z^d / B
  // rounds it up to finite index without touching any A_i.
  Mat bgens;
  for (const LatticeSubgroup& p : aprime)
    bgens.insert(bgens.end(), p.basis.begin(), p.basis.end());
  LatticeSubgroup b = LatticeSubgroup::span(d, bgens);
  Smith s = smith_normal_form(d, b.basis);
  Mat agens = b.basis;
  for (std::size_t j = b.rank(); j < d; ++j) agens.push_back(s.u_inv[j]);

  AbelianCommand out;
  out.ok = true;
  out.aprime = LatticeSubgroup::span(d, agens);
  out.index = ambient_index(out.aprime);
  if (out.index == 0)
    throw PropertyViolation("abelian_command: refinement failed to reach finite index");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(intersect(a[i], out.aprime) == aprime[i]))
      throw PropertyViolation("abelian_command: trace identity failed on input " +
                              std::to_string(i));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!(intersect(sum(out.aprime, a[i]), sum(out.aprime, a[j])) == out.aprime))
        throw PropertyViolation("abelian_command: sums of inputs " + std::to_string(i) +
                                " and " + std::to_string(j) + " meet beyond the refinement");
  return out;
}

}  // namespace cubical::lattice
