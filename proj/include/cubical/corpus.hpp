#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/maps.hpp"
#include "cubical/raag.hpp"

namespace cubical::corpus {

// One vertex x, loop edges a and b, one commutator square.
SquareComplex one_square_torus();
// Four vertices v00..v11, edges hRC (rightward) and uRC (downward), four
// squares; the standard 2x2 torus.
SquareComplex torus_2x2();
// One vertex, `rank` loop edges a, b, c, ...
SquareComplex rose(int rank);
// Subdivided rank-2 rose with the conventional names: vertices x, a1, b1;
// edges a1: x->a1, a2: a1->x, b1: x->b1, b2: b1->x.
SquareComplex r2();
// rows x cols squares from the integer grid; vertices v{r}_{c}.
SquareComplex grid(int rows, int cols);
// Tree with parents[i] < i (parents[0] ignored); vertices t0..t{n-1}.
SquareComplex tree_from_parents(const std::vector<int>& parents);
SquareComplex path_tree(int vertices);
SquareComplex star_tree(int leaves);
SquareComplex binary_tree(int depth);  // complete, 2^(depth+1)-1 vertices

// All 7 isomorphism classes of simple graphs on at most 3 vertices.
std::vector<raag::DefGraph> small_graphs();

// Every incidence-closed subcomplex. Guarded: refuses complexes with more
// than `cell_limit` cells.
std::vector<Subcomplex> all_subcomplexes(const SquareComplex& x, std::size_t cell_limit = 20);

Subcomplex sub_by_edges(const SquareComplex& x, const std::vector<std::string>& edge_names);
Subcomplex sub_by_vertex(const SquareComplex& x, const std::string& vertex_name);

// A materialized subcomplex inclusion; keeps the subcomplex alive. The
// parent must outlive the bundle.
struct Inclusion {
  std::string name;
  std::shared_ptr<SquareComplex> sub;
  CombinatorialMap map;  // sub -> parent
};

Inclusion make_inclusion(const std::string& name, const SquareComplex& parent,
                         const Subcomplex& s);

struct NamedComplex {
  std::string name;
  std::shared_ptr<SquareComplex> x;
};

// The analysis corpus: tori, subdivided roses of ranks 1..3, Salvetti
// complexes of all graphs on <= 3 vertices, and their subdivisions.
std::vector<NamedComplex> analysis_corpus();

// Backtracking isomorphism test for small complexes.
bool isomorphic(const SquareComplex& a, const SquareComplex& b);

}  // namespace cubical::corpus
