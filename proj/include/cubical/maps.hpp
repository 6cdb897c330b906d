#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/structure.hpp"
#include "cubical/word_oracle.hpp"

namespace cubical {

// Cellular map of square complexes: vertices to vertices, edges to edges
// respecting endpoints, squares to squares respecting boundaries.
struct CombinatorialMap {
  const SquareComplex* domain = nullptr;
  const SquareComplex* codomain = nullptr;
  std::vector<VertexId> v_img;
  std::vector<std::uint32_t> e_img;  // directed image of each edge's forward direction
  std::vector<SquareId> s_img;       // filled by validate()

  VertexId apply_v(VertexId v) const { return v_img[v]; }
  std::uint32_t apply_dir(std::uint32_t c) const { return e_img[c >> 1] ^ (c & 1u); }
  EdgePath apply_path(const EdgePath& p) const;

  // Checks endpoint compatibility and that every square's boundary image is
  // a square boundary of the codomain (up to rotation and reflection);
  // fills s_img. Throws StructuralError.
  void validate();
};

CombinatorialMap identity_map(const SquareComplex& x);
// f then g.
CombinatorialMap compose(const CombinatorialMap& f, const CombinatorialMap& g);
// Inclusion of a materialized subcomplex, given the id translations that
// Subcomplex::materialize produced.
CombinatorialMap inclusion_map(const SquareComplex& sub, const SquareComplex& parent,
                               const std::vector<VertexId>& v_new_of_old,
                               const std::vector<EdgeId>& e_new_of_old);

struct MapCheck {
  bool combinatorial = false;
  bool local_isometry = false;
  std::vector<std::string> witnesses;
};

// Local isometry: dart maps injective at every vertex, and link-full
// (images spanning a square corner forces the preimages to span one).
MapCheck check_map(const CombinatorialMap& m);

void require_local_isometry(const CombinatorialMap& m, const std::string& role);

// Smallest subcomplex containing the hyperplane: its member edges with
// endpoints and every square it crosses.
Subcomplex carrier(const SquareComplex& x, const StructureReport& r, HyperplaneId h);

struct HyperplaneRelation {
  bool intersects = false;
  std::vector<std::pair<VertexId, EdgeId>> osculations;  // (y; e) with e an edge of X
  bool inter_osculates = false;
};

// How a hyperplane of the codomain meets the image of a local isometry:
// crossed (it is the image of a domain hyperplane) and/or touched at a
// vertex through a dual edge with no preimage dart.
HyperplaneRelation complex_hyperplane_relation(const CombinatorialMap& phi,
                                               const StructureReport& r_domain,
                                               const StructureReport& r_codomain,
                                               HyperplaneId h);

// Locally convex: closed under incidence and corner-full (any corner of the
// parent whose two darts lie in the subcomplex has its square there too).
bool locally_convex(const Subcomplex& y);
std::string locally_convex_witness(const Subcomplex& y);

struct WallProjection {
  Subcomplex wproj;
  std::optional<bool> trivial;
  // One essential generator loop when trivial == false.
  std::optional<EdgePath> essential_loop;
};

// Vertices of y2 plus the cubes of y2 all of whose edges are parallel to
// some edge of y1. With an oracle, also decides whether every loop of the
// result dies in x.
WallProjection wall_projection(const SquareComplex& x, const StructureReport& r,
                               const Subcomplex& y1, const Subcomplex& y2,
                               const WordOracle* oracle);

// Cubical subdivision. Names: edge E splits at E:m into E:0, E:1; square S
// gains center S:c, spokes S:s0..S:s3, subsquares S:0..S:3.
SquareComplex subdivide(const SquareComplex& x);

}  // namespace cubical
