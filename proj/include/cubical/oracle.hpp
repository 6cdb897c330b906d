#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/raag.hpp"
#include "cubical/structure.hpp"
#include "cubical/word_oracle.hpp"

namespace cubical {

// Crossing-word oracle. On a directly special complex the sequence of
// signed hyperplane crossings embeds homotopy classes of paths into the
// right-angled Artin group of the crossing graph, so triviality and
// canonical keys reduce to word problems there.
class RaagWordOracle : public WordOracle {
 public:
  // Keeps references; x and r must outlive the oracle.
  RaagWordOracle(const SquareComplex& x, const StructureReport& r);

  // One letter per step: the hyperplane crossed, signed by co-orientation.
  raag::Word crossing_word(const EdgePath& p) const;

  bool trivial(const EdgePath& loop) const override;
  std::string canonical_key(const EdgePath& p) const override;
  const raag::DefGraph& graph() const { return graph_; }

 private:
  const SquareComplex* x_;
  const StructureReport* r_;
  raag::DefGraph graph_;
};

// Exact on square-free complexes, where homotopy rel endpoints is free
// reduction.
class FreeReductionOracle : public WordOracle {
 public:
  explicit FreeReductionOracle(const SquareComplex& x);
  bool trivial(const EdgePath& loop) const override;
  std::string canonical_key(const EdgePath& p) const override;

 private:
  const SquareComplex* x_;
};

// Signed crossing count per hyperplane. Decides triviality of the
// abelianized crossing class only: exact on standard tori, elsewhere a
// sound nontriviality certificate. Cross-check oracle for tests.
class AbelianCrossingOracle : public WordOracle {
 public:
  // Requires every hyperplane two-sided (signs need a co-orientation).
  AbelianCrossingOracle(const SquareComplex& x, const StructureReport& r);
  std::vector<long long> crossing_counts(const EdgePath& p) const;
  bool trivial(const EdgePath& loop) const override;
  std::string canonical_key(const EdgePath& p) const override;

 private:
  const SquareComplex* x_;
  const StructureReport* r_;
};

// Bounded search over elementary homotopies: square exchanges and
// backtrack insertion, free-reducing throughout, on paths no longer than
// max_len. trivial() returns true when a contraction is found and throws
// BudgetError when the search is exhausted or over budget; it never
// answers false. Semi-decision used to confirm contractions in tests.
class HomotopyBfsOracle : public WordOracle {
 public:
  HomotopyBfsOracle(const SquareComplex& x, std::size_t max_len, Budgets budgets = {});
  bool trivial(const EdgePath& loop) const override;
  [[noreturn]] std::string canonical_key(const EdgePath& p) const override;

 private:
  const SquareComplex* x_;
  std::size_t max_len_;
  Budgets budgets_;
};

}  // namespace cubical
