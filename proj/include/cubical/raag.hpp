#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubical/base.hpp"
#include "cubical/complex.hpp"

namespace cubical::raag {

// Simple graph on named generators; an edge means the generators commute.
struct DefGraph {
  std::vector<std::string> gen_names;
  std::vector<std::vector<char>> adj;

  std::size_t rank() const { return gen_names.size(); }
  bool adjacent(std::uint32_t g, std::uint32_t h) const { return adj[g][h] != 0; }
  std::uint32_t gen_id(const std::string& name) const;

  static DefGraph discrete(std::vector<std::string> names);
  static DefGraph complete(std::vector<std::string> names);
  void add_edge(std::uint32_t g, std::uint32_t h);
  bool valid() const;  // symmetric, loop-free
};

// Letter encoding: 2g is the generator g, 2g+1 its inverse.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

inline Letter pos(std::uint32_t g) { return 2 * g; }
inline Letter neg(std::uint32_t g) { return 2 * g + 1; }
inline Letter inv(Letter l) { return l ^ 1u; }
inline std::uint32_t gen(Letter l) { return l >> 1; }
inline bool positive(Letter l) { return (l & 1u) == 0; }

Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, int n);  // negative n allowed

Word parse_word(const DefGraph& g, const std::string& text);
std::string word_string(const DefGraph& g, const Word& w);

// Minimal-length representative: leftmost cancellation under the deletion
// condition (an inverse pair with everything between commuting).
Word reduce(const DefGraph& g, const Word& w);
bool is_reduced(const DefGraph& g, const Word& w);

// Shortlex-least word in the commutation class of the reduced form,
// computed left-greedily (at each step the least letter whose earlier
// letters all commute with it).
Word canonical(const DefGraph& g, const Word& w);
// Same value by exhaustive swap-orbit enumeration; test oracle.
Word canonical_by_orbit(const DefGraph& g, const Word& w, const Budgets& budgets = {});

bool words_equal(const DefGraph& g, const Word& a, const Word& b);
bool word_trivial(const DefGraph& g, const Word& w);

struct CycReduced {
  Word conjugator;  // original = conjugator * core * conjugator^-1
  Word core;        // minimal length in the conjugacy class
  Word canonical_cyclic;  // least element of the swap+rotation orbit of core
};

CycReduced cyc_reduce(const DefGraph& g, const Word& w, const Budgets& budgets = {});
bool conjugate(const DefGraph& g, const Word& a, const Word& b, const Budgets& budgets = {});

struct IndependenceResult {
  bool independent = false;
  // On failure: indices of the dependent pair and the exponents realizing
  // conjugate powers.
  std::size_t i = 0, j = 0;
  int m = 0, n = 0;  // words[i]^m conjugate to words[j]^n
};

// No two words have conjugate nontrivial powers (up to inversion): for each
// pair, tests the lcm-minimal exponent combination.
IndependenceResult independence_test(const DefGraph& g, const std::vector<Word>& words,
                                     const Budgets& budgets = {});

struct ConvexityResult {
  std::vector<std::uint32_t> support;  // generators of the cyclically reduced form
  bool convex = false;
  // When not convex: a split of the support into two halves that commute
  // with each other (a join).
  std::vector<std::uint32_t> join_left, join_right;
};

ConvexityResult convexity_test(const DefGraph& g, const Word& w, const Budgets& budgets = {});

struct CommandConditions {
  // pi[v][i] = exponent sum of generator v in words[i].
  std::vector<std::vector<long long>> pi;
  bool condition1 = false;  // every exponent sum nonzero
  bool condition2 = false;  // per generator pair, the n ratio values are distinct
  std::string witness;      // first failure, if any
  // A join factor of the whole graph (a complement component of size >= 2)
  // and the words projected onto it, when the graph is not complete.
  std::vector<std::uint32_t> join_factor;
  std::vector<Word> projected;
};

CommandConditions command_conditions(const DefGraph& g, const std::vector<Word>& words);

// One-vertex complex: a loop per generator, a commutator square per edge.
SquareComplex salvetti(const DefGraph& g);

}  // namespace cubical::raag

namespace cubical {
struct StructureReport;
// One vertex per hyperplane, an edge per intersecting pair.
raag::DefGraph crossing_graph(const SquareComplex& x, const StructureReport& r);
}  // namespace cubical
