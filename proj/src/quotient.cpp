#include "cubical/quotient.hpp"

#include <deque>
#include <map>
#include <string>
#include <utility>

#include "cubical/lattice.hpp"

namespace cubical {

namespace {

// Signed count of each basis generator in an expanded word.
lattice::Vec letter_counts(std::size_t rank, const std::vector<std::uint32_t>& letters) {
  lattice::Vec c(rank, 0);
  for (std::uint32_t l : letters) c[l >> 1] += (l & 1u) ? -1 : 1;
  return c;
}

EdgePath square_boundary(const SquareComplex& x, SquareId s) {
  return EdgePath{x.tail(x.squares[s].side[0]),
                  {x.squares[s].side.begin(), x.squares[s].side.end()}};
}

Perm word_image(const std::vector<Perm>& gens, std::size_t npoints,
                const std::vector<std::uint32_t>& letters) {
  Perm r = Perm::identity(npoints);
  for (std::uint32_t l : letters) r = r * (l & 1u ? gens[l >> 1].inverse() : gens[l >> 1]);
  return r;
}

}  // namespace

Perm FiniteQuotient::eval(const EdgePath& loop) const {
  loop.validate(ambient());
  if (loop.start != base() || !loop.is_closed(ambient()))
    throw StructuralError("quotient evaluation needs a loop at the basepoint");
  if (!domain.contains(loop))
    throw StructuralError("loop lies outside the quotient's domain subgroup");
  return eval_fn(loop);
}

std::uint64_t FiniteQuotient::order_of(const EdgePath& loop) const { return eval(loop).order(); }

bool FiniteQuotient::trivial_image(const EdgePath& loop) const { return eval(loop).is_identity(); }

FiniteQuotient quotient_from_action(const SquareComplex& x, VertexId base, const GroupAction& act) {
  FiniteQuotient q;
  q.domain = full_group(x, base);
  GroupAction aligned = align_action(q.domain.basis, act);
  for (SquareId s = 0; s < x.ns(); ++s) {
    if (!word_image(aligned.gens, aligned.npoints, q.domain.basis.expand(square_boundary(x, s)))
             .is_identity())
      throw StructuralError("action breaks the relation of square " + x.square_name[s]);
  }
  q.npoints = aligned.npoints;
  q.eval_fn = [basis = q.domain.basis, gens = std::move(aligned.gens),
               np = aligned.npoints](const EdgePath& loop) {
    return word_image(gens, np, basis.expand(loop));
  };
  return q;
}

FiniteQuotient cyclic_count_quotient(const SquareComplex& x, VertexId base,
                                     std::vector<std::int64_t> weights, std::int64_t n) {
  if (n < 1) throw StructuralError("cyclic quotient needs a positive modulus");
  FiniteQuotient q;
  q.domain = full_group(x, base);
  const Pi1Basis& basis = q.domain.basis;
  if (weights.size() != basis.rank())
    throw StructuralError("got " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(basis.rank()) + " basis generators");
  auto shift_of = [n, &weights](const lattice::Vec& counts) {
    __int128 s = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      s += static_cast<__int128>(counts[i]) * weights[i];
    auto r = static_cast<std::int64_t>(s % n);
    return r < 0 ? r + n : r;
  };
  for (SquareId s = 0; s < x.ns(); ++s) {
    if (shift_of(letter_counts(basis.rank(), basis.expand(square_boundary(x, s)))) != 0)
      throw StructuralError("weights break the relation of square " + x.square_name[s]);
  }
  q.npoints = static_cast<std::size_t>(n);
  q.eval_fn = [basis, shift_of, n](const EdgePath& loop) {
    std::int64_t t = shift_of(letter_counts(basis.rank(), basis.expand(loop)));
    Perm p(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) p.img[i] = static_cast<std::uint32_t>((i + t) % n);
    return p;
  };
  return q;
}

FiniteQuotient abelianization_quotient(const SquareComplex& x, VertexId base, std::int64_t n,
                                       Budgets budgets) {
  if (n < 1) throw StructuralError("abelianization quotient needs a positive modulus");
  FiniteQuotient q;
  q.domain = full_group(x, base);
  const Pi1Basis& basis = q.domain.basis;
  std::size_t rank = basis.rank();

  lattice::Mat cols;
  for (SquareId s = 0; s < x.ns(); ++s)
    cols.push_back(letter_counts(rank, basis.expand(square_boundary(x, s))));
  for (std::size_t i = 0; i < rank; ++i) {
    lattice::Vec e(rank, 0);
    e[i] = n;
    cols.push_back(std::move(e));
  }
  lattice::Smith sm = lattice::smith_normal_form(rank, cols);

  // The n*I columns make every elementary divisor a positive divisor of n;
  // factors of size one carry nothing and are dropped.
  std::vector<std::int64_t> mods;
  std::vector<std::size_t> rows;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < sm.diag.size(); ++i) {
    if (sm.diag[i] <= 1) continue;
    auto d = static_cast<std::uint64_t>(sm.diag[i]);
    if (total > budgets.orbit / d) throw BudgetError("abelianization size budget");
    total *= d;
    mods.push_back(sm.diag[i]);
    rows.push_back(i);
  }

  q.npoints = total;
  q.eval_fn = [basis, u = sm.u, mods, rows, total](const EdgePath& loop) {
    lattice::Vec counts = letter_counts(basis.rank(), basis.expand(loop));
    std::vector<std::int64_t> shift(mods.size());
    for (std::size_t j = 0; j < mods.size(); ++j) {
      __int128 acc = 0;
      for (std::size_t col = 0; col < counts.size(); ++col)
        acc += static_cast<__int128>(u[col][rows[j]]) * counts[col];
      auto r = static_cast<std::int64_t>(acc % mods[j]);
      shift[j] = r < 0 ? r + mods[j] : r;
    }
    Perm p(total);
    std::vector<std::int64_t> coord(mods.size(), 0);
    for (std::uint64_t pt = 0; pt < total; ++pt) {
      std::uint64_t img = 0, stride = 1;
      for (std::size_t j = 0; j < mods.size(); ++j) {
        img += static_cast<std::uint64_t>((coord[j] + shift[j]) % mods[j]) * stride;
        stride *= static_cast<std::uint64_t>(mods[j]);
      }
      p.img[pt] = static_cast<std::uint32_t>(img);
      for (std::size_t j = 0; j < mods.size(); ++j) {
        if (++coord[j] < mods[j]) break;
        coord[j] = 0;
      }
    }
    return p;
  };
  return q;
}

FiniteQuotient product_quotient(const FiniteQuotient& q,
                                const std::function<EdgePath(const EdgePath&)>& rho,
                                const SubgroupRep& domain) {
  if (domain.basis.x != q.domain.basis.x || domain.base() != q.base())
    throw StructuralError("product quotient needs matching complex and basepoint");
  FiniteQuotient t;
  t.domain = domain;
  std::size_t np = q.npoints;
  t.npoints = 2 * np;
  t.eval_fn = [q, rho, np](const EdgePath& loop) {
    Perm a = q.eval(loop);
    Perm b = q.eval(rho(loop));
    Perm r(2 * np);
    for (std::size_t i = 0; i < np; ++i) {
      r.img[i] = a.img[i];
      r.img[np + i] = static_cast<std::uint32_t>(np) + b.img[i];
    }
    return r;
  };

  // The pair map is a homomorphism iff loop -> q(rho(loop)) is one; check
  // every product of two Schreier generators of the domain.
  SchreierGens sg = schreier_generators(domain);
  std::vector<Perm> imgs;
  imgs.reserve(sg.loops.size());
  for (const auto& l : sg.loops) imgs.push_back(t.eval(l));
  for (std::size_t i = 0; i < sg.loops.size(); ++i) {
    for (std::size_t j = 0; j < sg.loops.size(); ++j) {
      if (!(t.eval(sg.loops[i] + sg.loops[j]) == imgs[i] * imgs[j]))
        throw PropertyViolation("pair map breaks the homomorphism law on Schreier generators " +
                                std::to_string(i) + " and " + std::to_string(j));
    }
  }
  return t;
}

std::vector<Perm> image_closure(const FiniteQuotient& t, const std::vector<EdgePath>& gens,
                                Budgets budgets) {
  std::vector<Perm> gi;
  gi.reserve(gens.size());
  for (const auto& g : gens) gi.push_back(t.eval(g));
  std::map<Perm, std::uint32_t> index;
  std::vector<Perm> elems{Perm::identity(t.npoints)};
  index[elems[0]] = 0;
  std::deque<std::uint32_t> bfs{0};
  while (!bfs.empty()) {
    std::uint32_t e = bfs.front();
    bfs.pop_front();
    for (const Perm& g : gi) {
      Perm nx = elems[e] * g;
      if (index.emplace(nx, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(nx);
        if (elems.size() > budgets.orbit) throw BudgetError("image subgroup closure budget");
        bfs.push_back(static_cast<std::uint32_t>(elems.size() - 1));
      }
    }
  }
  return elems;
}

}  // namespace cubical
