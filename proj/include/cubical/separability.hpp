#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cubical/geometry.hpp"
#include "cubical/imitator.hpp"
#include "cubical/quotient.hpp"
#include "cubical/word_oracle.hpp"

namespace cubical {

// A finite quotient of the fundamental group in which the given essential
// loop survives, built from the imitator action on a convex patch of the
// universal cover around the loop's lift.
struct RfWitness {
  FiniteQuotient quotient;                  // domain admits the whole group
  std::shared_ptr<SquareComplex> hull;      // the patch carrying the lift
  std::shared_ptr<CombinatorialMap> patch;  // hull -> ambient local isometry
  VertexId hull_base = kNone;               // lift of the loop's basepoint
  VertexId hull_end = kNone;                // where the loop's image moves it
};

RfWitness rf_witness(const SquareComplex& x, const StructureReport& rx, const EdgePath& gamma,
                     const WordOracle& oracle, Budgets budgets = {});

// One convex factor of a coset set: a based local isometry into the ambient
// complex, with its basepoint over the spec's basepoint.
struct CosetFactor {
  const CombinatorialMap* phi = nullptr;  // Y -> X
  VertexId y = kNone;
};

struct SeparationSpec {
  const SquareComplex* x = nullptr;
  const StructureReport* rx = nullptr;
  EdgePath g;                        // the element, a based loop
  std::vector<CosetFactor> factors;  // the coset set K_1 ... K_m, m in 1..3
  const WordOracle* oracle = nullptr;
  Budgets budgets;
  std::int64_t modulus_budget = 12;  // abelian fallback tried up to this modulus
};

struct SeparationWitness {
  FiniteQuotient quotient;  // t with t(g) outside the coset-set image
  // Generators actually enumerated per factor: the factor's own generators
  // when it lies in t's domain, otherwise generators of its intersection
  // with the domain.
  std::vector<std::vector<EdgePath>> factor_generators;
  std::size_t image_size = 0;  // size of the enumerated coset-set image
};

// A finite quotient separating g from the product K_1...K_m, built with the
// retraction combinators: the imitator of factor 1 (factor 2 when m == 3)
// retracts, the auxiliary quotient comes from a recursive witness search,
// and the claim t(g) not in t(K_1)...t(K_m) is verified by enumeration.
// Membership of g in the coset set is refused with a decomposition witness
// (StructuralError); an exhausted search is BudgetError, never a wrong
// answer.
SeparationWitness separate_coset(const SeparationSpec& spec);

}  // namespace cubical
