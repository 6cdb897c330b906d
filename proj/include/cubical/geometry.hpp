#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/maps.hpp"
#include "cubical/structure.hpp"
#include "cubical/word_oracle.hpp"

namespace cubical {

// A finite convex patch of the universal cover: the sup-metric ball of the
// given radius around a lift of the base vertex. Vertices are canonical path
// representatives handed out by the word oracle, so two development paths
// reach the same vertex exactly when the oracle calls them homotopic.
struct DevelopedBall {
  std::shared_ptr<SquareComplex> ball;
  CombinatorialMap to_base;  // ball -> ambient complex
  VertexId center = kNone;
  std::size_t radius = 0;
  std::vector<std::size_t> dist;   // edge-path distance from the center
  std::vector<std::size_t> depth;  // sup-metric distance from the center
  std::vector<char> boundary;      // depth == radius
  StructureReport walls;
  std::vector<std::vector<char>> side;  // per wall: 2-coloring, center on side 0

  bool separates(HyperplaneId h, VertexId u, VertexId v) const {
    return side[h][u] != side[h][v];
  }
};

// Develops the sup-metric ball: breadth-first development to edge-path
// distance `radius`, then corner completion to its convex hull. The oracle
// must decide null-homotopy soundly for x.
DevelopedBall develop_ball(const SquareComplex& x, VertexId base, std::size_t radius,
                           const WordOracle& oracle, Budgets budgets = {});

// Walls whose sides split u from v; their count is the edge-path distance.
std::vector<HyperplaneId> separating_walls(const DevelopedBall& d, VertexId u, VertexId v);
// A maximum pairwise-non-crossing family of separating walls; its size is
// the sup-metric distance.
std::vector<HyperplaneId> disjoint_separators(const DevelopedBall& d, VertexId u, VertexId v);
std::size_t dinf(const DevelopedBall& d, VertexId u, VertexId v);

// Smallest full subcomplex containing the vertices and closed under wall
// separation: a vertex joins exactly when every wall with all the input on
// one side keeps it on that side. Checked locally convex before returning.
Subcomplex hull_of_vertices(const DevelopedBall& d, const std::vector<VertexId>& vs);
// Convex hull of a path's vertex set; additionally checks that the hull's
// dual walls are exactly the walls the path crosses.
Subcomplex hull_of_path(const DevelopedBall& d, const EdgePath& lifted);

// Nearest-point projection to a convex subcomplex; the minimizer is checked
// to be unique.
VertexId gate(const DevelopedBall& d, const Subcomplex& y, VertexId v);

// The two gate projections, their separating walls, and the product region
// between them, all verified: a wall crosses a projection exactly when it
// crosses both inputs, the projections pair off along geodesics crossing one
// fixed separator family, and the hull between them stacks equal-size
// parallel copies.
struct BridgeReport {
  Subcomplex proj1, proj2;  // gate images, full subcomplexes
  std::size_t distance = 0;
  std::vector<HyperplaneId> separators;
  std::vector<std::pair<VertexId, VertexId>> pairing;  // proj1 vertex, its proj2 gate
  Subcomplex bridge;  // hull of the two projections
};

BridgeReport bridge_check(const DevelopedBall& d, const Subcomplex& y1, const Subcomplex& y2);

// The sup-metric ball of radius level+1 around `from`, the walls dual to its
// outgoing edges, and for each such wall a family of level+1 pairwise
// non-crossing walls separating it (carrier and all) from `from`.
struct DinfFrontier {
  std::vector<std::size_t> depth;  // sup-metric distance from `from`, per vertex
  Subcomplex w;
  std::vector<HyperplaneId> frontier;
  std::vector<std::vector<HyperplaneId>> certificate;  // parallel to frontier
};

DinfFrontier dinf_frontier(const DevelopedBall& d, VertexId from, std::size_t level);

}  // namespace cubical
