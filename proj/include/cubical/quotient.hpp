#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cubical/covers.hpp"
#include "cubical/io.hpp"

namespace cubical {

// Homomorphism from a finite-index subgroup of the fundamental group to a
// finite permutation group, evaluated on based loops.
struct FiniteQuotient {
  SubgroupRep domain;       // evaluation requires membership; full_group admits everyone
  std::size_t npoints = 0;  // degree of the permutation image
  std::function<Perm(const EdgePath&)> eval_fn;

  const SquareComplex& ambient() const { return domain.ambient(); }
  VertexId base() const { return domain.base(); }
  Perm eval(const EdgePath& loop) const;
  std::uint64_t order_of(const EdgePath& loop) const;
  bool trivial_image(const EdgePath& loop) const;
};

// Basis generator i acts by act.gens[i] (name-aligned when names are given).
// Square relations must map to the identity.
FiniteQuotient quotient_from_action(const SquareComplex& x, VertexId base, const GroupAction& act);

// loop -> translation of Z/n by the weighted signed generator count.
FiniteQuotient cyclic_count_quotient(const SquareComplex& x, VertexId base,
                                     std::vector<std::int64_t> weights, std::int64_t n);

// Mod-n abelianization, acting on itself by translation.
FiniteQuotient abelianization_quotient(const SquareComplex& x, VertexId base, std::int64_t n,
                                       Budgets budgets = {});

// t(h) = (q(h), q(rho(h))) acting block-diagonally on two copies of q's
// points, so nested products grow linearly. rho must be a homomorphism of
// `domain` into q's domain; the law is verified on all products of two
// Schreier generators.
FiniteQuotient product_quotient(const FiniteQuotient& q,
                                const std::function<EdgePath(const EdgePath&)>& rho,
                                const SubgroupRep& domain);

// Closure of the images of the given based loops: the image subgroup.
std::vector<Perm> image_closure(const FiniteQuotient& t, const std::vector<EdgePath>& gens,
                                Budgets budgets = {});

}  // namespace cubical
