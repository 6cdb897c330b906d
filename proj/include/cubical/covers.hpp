#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/io.hpp"
#include "cubical/maps.hpp"
#include "cubical/word_oracle.hpp"

namespace cubical {

// Spanning-tree presentation of the fundamental group: one generator per
// non-tree edge, named after it; any based path expands to a word in the
// generators.
struct Pi1Basis {
  const SquareComplex* x = nullptr;
  VertexId base = kNone;
  std::vector<std::uint32_t> parent_dart;  // dart into v from its tree parent; kNone at base
  std::vector<char> in_tree;               // per edge
  std::vector<EdgeId> gen_edge;            // non-tree edges, ascending
  std::vector<std::uint32_t> gen_of_edge;  // edge -> generator index, kNone on tree edges

  std::size_t rank() const { return gen_edge.size(); }
  const std::string& gen_name(std::size_t i) const { return x->edge_name[gen_edge[i]]; }

  // Tree geodesic base -> v.
  EdgePath tree_path(VertexId v) const;
  // tree_path(tail) + edge + reversed tree_path(head).
  EdgePath generator_loop(std::size_t i) const;

  // Letters 2i (generator i) and 2i+1 (its inverse). expand(p) is the class
  // of p * tree_path(end(p)).reversed(); for a based loop, the class of p.
  std::vector<std::uint32_t> expand(const EdgePath& p) const;
  // Concatenation of generator loops per letter, freely reduced.
  EdgePath loop_of_letters(const std::vector<std::uint32_t>& letters) const;
};

Pi1Basis pi1_basis(const SquareComplex& x, VertexId base);

// Reorders act.gens to the basis generator order; empty names mean
// positional. Throws on count or name mismatch.
GroupAction align_action(const Pi1Basis& basis, const GroupAction& act);

// Letters as in Pi1Basis::expand.
std::vector<std::uint32_t> reduce_letters(std::vector<std::uint32_t> w);
std::vector<std::uint32_t> invert_letters(const std::vector<std::uint32_t>& w);

// Finite covering with a distinguished fiber. The total complex is owned by
// the cover; the base complex must outlive it.
struct CoveringMap {
  std::shared_ptr<SquareComplex> total;
  CombinatorialMap map;         // total -> base complex
  VertexId base_total = kNone;  // distinguished lift of the basepoint
  std::vector<VertexId> fiber;  // all lifts of the basepoint; fiber[0] == base_total

  const SquareComplex& base_complex() const { return *map.codomain; }
  VertexId base_vertex() const { return map.v_img[base_total]; }
  std::size_t degree() const { return fiber.size(); }
  std::uint32_t fiber_index(VertexId total_vertex) const;  // kNone if absent

  // Unique lift of a path of the base complex starting at a total vertex
  // over its start.
  EdgePath lift_path(const EdgePath& p, VertexId start_total) const;
};

CoveringMap identity_cover(const SquareComplex& x, VertexId base);

// The same covering with its distinguished fiber moved over another base
// vertex; the smallest lift becomes the based one.
CoveringMap rebase_cover(const CoveringMap& mu, VertexId new_base);

// Per-vertex dart bijectivity, corner-count equality, surjectivity, constant
// fiber size. Throws StructuralError with a witness.
void verify_covering(const CombinatorialMap& m);

// Derived cover of a transitive action of the basis generators: vertex v@p
// lies over v and the monodromy of generator i equals act.gens[i]. Throws
// StructuralError when the action breaks a square relation.
CoveringMap cover_from_action(const SquareComplex& x, VertexId base, const GroupAction& act,
                              Budgets budgets = {});

// Action of the basis generators on the fiber by path lifting.
GroupAction monodromy(const CoveringMap& mu);

// One component of the pullback of a local isometry along a cover. A based
// path here closes up exactly when its projections both close up.
struct Elevation {
  std::shared_ptr<SquareComplex> total;
  CombinatorialMap to_cover;   // elevated map into the cover's total complex
  CombinatorialMap to_domain;  // covering onto the original domain
  VertexId base = kNone;       // set by the based variant
};

// All components of the pullback of phi and mu, ordered deterministically.
// phi.codomain must be the very complex mu covers.
std::vector<Elevation> elevations(const CombinatorialMap& phi, const CoveringMap& mu,
                                  Budgets budgets = {});
// The component through (y_base, xhat_base); requires compatible images.
Elevation based_elevation(const CombinatorialMap& phi, const CoveringMap& mu, VertexId y_base,
                          VertexId xhat_base, Budgets budgets = {});

// Connected cover factoring through every input: the component of the
// iterated fiber product through the basepoints.
CoveringMap refine(const SquareComplex& x, VertexId base,
                   const std::vector<const CoveringMap*>& covers, Budgets budgets = {});

// Regular cover from the right-translation action of the monodromy image on
// itself; factors through mu and its deck group acts transitively on the
// fiber.
CoveringMap regular_closure(const CoveringMap& mu, Budgets budgets = {});

// Finite-index subgroup as the stabilizer of point 0 of a pointed transitive
// action of the basis generators.
struct SubgroupRep {
  Pi1Basis basis;
  GroupAction action;  // gens aligned with basis generators

  const SquareComplex& ambient() const { return *basis.x; }
  VertexId base() const { return basis.base; }
  std::size_t index() const { return action.npoints; }

  Perm eval_letters(const std::vector<std::uint32_t>& letters) const;
  Perm eval_loop(const EdgePath& loop) const;  // loop based at base()
  bool contains(const EdgePath& loop) const { return eval_loop(loop)(0) == 0; }

  // Perms valid and transitive, square relations respected. Throws.
  void validate() const;
};

SubgroupRep full_group(const SquareComplex& x, VertexId base);
SubgroupRep subgroup_from_action(const SquareComplex& x, VertexId base, GroupAction act);
// Stabilizer of the based fiber point under monodromy.
SubgroupRep subgroup_of_cover(const CoveringMap& mu);
// Cover of the coset action; its monodromy equals s.action.
CoveringMap cover_of_subgroup(const SubgroupRep& s, Budgets budgets = {});

// All inputs must share ambient complex and basepoint.
SubgroupRep intersect_subgroups(const std::vector<const SubgroupRep*>& subs, Budgets budgets = {});
// Kernel of the coset action: the largest normal subgroup contained in s.
SubgroupRep normal_core(const SubgroupRep& s, Budgets budgets = {});
bool is_normal(const SubgroupRep& s);
// Representation of g s g^{-1}: the same action with points relabeled so the
// new stabilizer of 0 is the conjugate.
SubgroupRep conjugate_subgroup(const SubgroupRep& s, const EdgePath& g);

// {h in the subgroup of s : inner(h) fixes 0}, as a finite-index subgroup of
// the ambient group. inner must restrict to a homomorphism on based loops
// lying in the subgroup, valued in permutations of inner_points points; it
// is evaluated on Schreier transversal corrections.
SubgroupRep subgroup_preimage(const SubgroupRep& s, std::size_t inner_points,
                              const std::function<Perm(const EdgePath&)>& inner,
                              Budgets budgets = {});

struct SchreierGens {
  std::vector<std::vector<std::uint32_t>> words;  // letters in the ambient basis
  std::vector<EdgePath> loops;                    // the same, as based loops
  std::vector<std::vector<std::uint32_t>> transversal_words;  // per point
  std::vector<EdgePath> transversal_loops;
};

// Subgroup generators from the Schreier tree of the coset action. Identity
// generators are dropped; duplicates are merged literally, and up to
// homotopy when an oracle is passed (or when none is needed: square-free
// ambients dedup by free reduction).
SchreierGens schreier_generators(const SubgroupRep& s, const WordOracle* oracle = nullptr);

// Every based edge path of length <= max_len, in dart order; throws
// BudgetError past the guard.
std::vector<EdgePath> based_paths(const SquareComplex& x, VertexId base, std::size_t max_len,
                                  std::size_t guard = 500000);

}  // namespace cubical
