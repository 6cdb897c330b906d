#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/corpus.hpp"
#include "cubical/covers.hpp"
#include "cubical/geometry.hpp"
#include "cubical/io.hpp"
#include "cubical/maps.hpp"
#include "cubical/oracle.hpp"
#include "cubical/structure.hpp"

using namespace cubical;

namespace {

// The unique ball vertex over a named base vertex; requires an injective fiber.
VertexId over(const DevelopedBall& d, const std::string& name) {
  VertexId target = d.to_base.codomain->vertex_id(name);
  VertexId found = kNone;
  for (VertexId v = 0; v < d.ball->nv(); ++v) {
    if (d.to_base.v_img[v] != target) continue;
    REQUIRE(found == kNone);
    found = v;
  }
  REQUIRE(found != kNone);
  return found;
}

Subcomplex region(const DevelopedBall& d, const std::vector<std::string>& names) {
  std::vector<char> in(d.ball->nv(), 0);
  for (const std::string& n : names) in[over(d, n)] = 1;
  return Subcomplex::induced(*d.ball, in);
}

EdgePath lift_from(const DevelopedBall& d, VertexId start, const std::string& names) {
  EdgePath down = path_from_names(*d.to_base.codomain, d.to_base.v_img[start],
                                  parse_signed_names(names));
  EdgePath up;
  up.start = start;
  VertexId cur = start;
  for (std::uint32_t dart : down.steps) {
    std::uint32_t lifted = kNone;
    for (std::uint32_t f : d.ball->darts_at(cur))
      if (d.to_base.apply_dir(f) == dart) {
        REQUIRE(lifted == kNone);
        lifted = f;
      }
    REQUIRE(lifted != kNone);
    up.steps.push_back(lifted);
    cur = d.ball->head(lifted);
  }
  return up;
}

std::map<std::size_t, std::size_t> degree_histogram(const SquareComplex& x) {
  std::map<std::size_t, std::size_t> h;
  for (VertexId v = 0; v < x.nv(); ++v) ++h[x.darts_at(v).size()];
  return h;
}

// Deliberately square-blind: keys paths by the free reduction of their dart
// word, so commuting relations are invisible and the development never closes.
struct ReducedDartOracle final : WordOracle {
  bool trivial(const EdgePath& loop) const override { return free_reduce(loop).empty(); }
  std::string canonical_key(const EdgePath& p) const override {
    EdgePath r = free_reduce(p);
    std::string k;
    for (std::uint32_t d : r.steps) {
      k += std::to_string(d);
      k += '.';
    }
    return k;
  }
};

}  // namespace

TEST_CASE("developed balls are sup-metric balls") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  RaagWordOracle to(*t, rt);

  DevelopedBall b0 = develop_ball(*t, t->vertex_id("v00"), 0, to);
  CHECK(b0.ball->nv() == 1);
  CHECK(b0.ball->ne() == 0);

  DevelopedBall b1 = develop_ball(*t, t->vertex_id("v00"), 1, to);
  CHECK(b1.ball->nv() == 9);
  CHECK(b1.ball->ne() == 12);
  CHECK(b1.ball->ns() == 4);
  CHECK(corpus::isomorphic(*b1.ball, corpus::grid(2, 2)));
  CHECK(b1.depth[b1.center] == 0);
  CHECK_FALSE(b1.boundary[b1.center]);
  std::size_t rim = 0;
  for (VertexId v = 0; v < b1.ball->nv(); ++v) rim += b1.boundary[v];
  CHECK(rim == 8);

  DevelopedBall b2 = develop_ball(*t, t->vertex_id("v00"), 2, to);
  CHECK(b2.ball->nv() == 25);
  CHECK(b2.ball->ne() == 40);
  CHECK(b2.ball->ns() == 16);
  std::map<std::size_t, std::size_t> want{{2, 4}, {3, 12}, {4, 9}};
  CHECK(degree_histogram(*b2.ball) == want);
  std::size_t rim2 = 0, deepest = 0;
  for (VertexId v = 0; v < b2.ball->nv(); ++v) {
    rim2 += b2.boundary[v];
    deepest = std::max(deepest, b2.depth[v]);
  }
  CHECK(rim2 == 16);
  CHECK(deepest == 2);

  // The abelian oracle is exact on the torus and develops the same patch.
  AbelianCrossingOracle ta(*t, rt);
  DevelopedBall b1a = develop_ball(*t, t->vertex_id("v00"), 1, ta);
  CHECK(corpus::isomorphic(*b1a.ball, *b1.ball));

  auto r2 = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rr = analyze(*r2);
  FreeReductionOracle rf(*r2);
  DevelopedBall tree2 = develop_ball(*r2, r2->vertex_id("x"), 2, rf);
  CHECK(tree2.ball->nv() == 9);
  CHECK(tree2.ball->ne() == 8);
  CHECK(tree2.ball->ns() == 0);
  std::map<std::size_t, std::size_t> spider{{1, 4}, {2, 4}, {4, 1}};
  CHECK(degree_histogram(*tree2.ball) == spider);
  RaagWordOracle rw(*r2, rr);
  DevelopedBall tree2w = develop_ball(*r2, r2->vertex_id("x"), 2, rw);
  CHECK(corpus::isomorphic(*tree2w.ball, *tree2.ball));

  CHECK_THROWS_AS(develop_ball(*t, t->vertex_id("v00"), 4, to, Budgets{20, 100000}),
                  BudgetError);
  // A square-blind oracle unfolds the torus into a tree that never closes up;
  // the vertex budget is the net that catches it.
  ReducedDartOracle blind;
  CHECK_THROWS_AS(develop_ball(*t, t->vertex_id("v00"), 1, blind, Budgets{500, 100000}),
                  BudgetError);
}

TEST_CASE("crossing words decide null-homotopy") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  RaagWordOracle to(*t, rt);
  AbelianCrossingOracle ta(*t, rt);

  std::vector<EdgePath> loops;
  for (const EdgePath& p : based_paths(*t, t->vertex_id("v00"), 6))
    if (!p.empty() && p.is_closed(*t)) loops.push_back(p);
  REQUIRE(loops.size() > 100);
  for (const EdgePath& p : loops) CHECK(to.trivial(p) == ta.trivial(p));

  // Bounded homotopy search confirms a sample of the trivial answers, and
  // triviality is closed under concatenation.
  HomotopyBfsOracle bfs(*t, 10);
  std::vector<EdgePath> trivial;
  for (const EdgePath& p : loops)
    if (to.trivial(p)) trivial.push_back(p);
  REQUIRE(trivial.size() > 10);
  std::mt19937 rng(97);
  for (int i = 0; i < 12; ++i) CHECK(bfs.trivial(trivial[rng() % trivial.size()]));
  for (int i = 0; i < 40; ++i) {
    const EdgePath& a = trivial[rng() % trivial.size()];
    const EdgePath& b = trivial[rng() % trivial.size()];
    CHECK(to.trivial(a + b));
  }

  // On a wedge of circles the crossing word is the free word.
  auto r2 = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rr = analyze(*r2);
  RaagWordOracle rw(*r2, rr);
  FreeReductionOracle rf(*r2);
  for (const EdgePath& p : based_paths(*r2, r2->vertex_id("x"), 7))
    if (!p.empty() && p.is_closed(*r2)) CHECK(rw.trivial(p) == rf.trivial(p));
}

TEST_CASE("hulls trap exactly the crossed walls") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  RaagWordOracle to(*t, rt);
  DevelopedBall d = develop_ball(*t, t->vertex_id("v00"), 2, to);

  EdgePath edge = lift_from(d, d.center, "h00");
  Subcomplex he = hull_of_path(d, edge);
  CHECK(he.vertex_count() == 2);
  CHECK(he.edge_count() == 1);
  CHECK(he.square_count() == 0);

  EdgePath bent = lift_from(d, d.center, "h00 u01");
  Subcomplex hb = hull_of_path(d, bent);
  CHECK(hb.vertex_count() == 4);
  CHECK(hb.edge_count() == 4);
  CHECK(hb.square_count() == 1);

  // Minimality: dropping the vertex off the path breaks convexity.
  for (VertexId v : hb.vertices()) {
    bool on_path = false;
    for (VertexId u : path_vertices(*d.ball, bent)) on_path |= u == v;
    if (on_path) continue;
    std::vector<char> keep(d.ball->nv(), 0);
    for (VertexId u : hb.vertices()) keep[u] = u != v;
    Subcomplex sub = Subcomplex::induced(*d.ball, keep);
    bool still_convex = sub.connected() && locally_convex(sub);
    CHECK_FALSE(still_convex);
  }

  // Paths in a tree development are their own hulls.
  auto r2 = std::make_shared<SquareComplex>(corpus::r2());
  FreeReductionOracle rf(*r2);
  DevelopedBall tr = develop_ball(*r2, r2->vertex_id("x"), 3, rf);
  std::mt19937 rng(1234);
  for (int round = 0; round < 25; ++round) {
    EdgePath walk;
    walk.start = tr.center;
    VertexId cur = tr.center;
    for (int i = 0; i < 2; ++i) {
      const auto& darts = tr.ball->darts_at(cur);
      std::uint32_t dd = darts[rng() % darts.size()];
      walk.steps.push_back(dd);
      cur = tr.ball->head(dd);
    }
    walk = free_reduce(walk);
    Subcomplex hp = hull_of_vertices(tr, path_vertices(*tr.ball, walk));
    CHECK(hp.vertex_count() == walk.size() + 1);
    CHECK(hp.edge_count() == walk.size());
    CHECK(hp.square_count() == 0);
  }

  // The same bent path is refused when its hull would touch the rim.
  DevelopedBall small = develop_ball(*t, t->vertex_id("v00"), 1, to);
  EdgePath out = lift_from(small, small.center, "h00 u01");
  CHECK_THROWS_AS(hull_of_path(small, out), StructuralError);
}

TEST_CASE("gates project to the unique closest vertex") {
  auto g = std::make_shared<SquareComplex>(corpus::grid(3, 3));
  StructureReport rg = analyze(*g);
  RaagWordOracle go(*g, rg);
  DevelopedBall d = develop_ball(*g, g->vertex_id("v1_1"), 3, go);
  REQUIRE(d.ball->nv() == g->nv());
  REQUIRE(d.ball->ne() == g->ne());
  REQUIRE(d.ball->ns() == g->ns());
  std::vector<char> hit(g->nv(), 0);
  for (VertexId v = 0; v < d.ball->nv(); ++v) hit[d.to_base.v_img[v]] = 1;
  for (char c : hit) REQUIRE(c == 1);
  for (VertexId v = 0; v < d.ball->nv(); ++v) REQUIRE_FALSE(d.boundary[v]);

  Subcomplex bottom = region(d, {"v2_0", "v2_1", "v2_2"});
  CHECK(gate(d, bottom, over(d, "v0_0")) == over(d, "v2_0"));
  CHECK(gate(d, bottom, over(d, "v0_2")) == over(d, "v2_2"));
  for (VertexId v : bottom.vertices()) CHECK(gate(d, bottom, v) == v);

  // Idempotent and 1-Lipschitz for the wall-counting metric on all pairs.
  std::vector<VertexId> proj(d.ball->nv());
  for (VertexId v = 0; v < d.ball->nv(); ++v) {
    proj[v] = gate(d, bottom, v);
    CHECK(gate(d, bottom, proj[v]) == proj[v]);
  }
  for (VertexId u = 0; u < d.ball->nv(); ++u) {
    for (VertexId v = 0; v < d.ball->nv(); ++v) {
      std::size_t duv = separating_walls(d, u, v).size();
      std::size_t dproj = separating_walls(d, proj[u], proj[v]).size();
      CHECK(dproj <= duv);
    }
  }

  auto tree = std::make_shared<SquareComplex>(corpus::path_tree(5));
  FreeReductionOracle fo(*tree);
  DevelopedBall dt = develop_ball(*tree, tree->vertex_id("t0"), 8, fo);
  Subcomplex mid = region(dt, {"t1", "t2"});
  CHECK(gate(dt, mid, over(dt, "t4")) == over(dt, "t2"));
  CHECK(gate(dt, mid, over(dt, "t0")) == over(dt, "t1"));

  Subcomplex split = region(d, {"v0_0", "v0_2"});
  CHECK_THROWS_AS(gate(d, split, over(d, "v1_1")), StructuralError);
}

TEST_CASE("bridges pair projections across a fixed wall family") {
  auto g = std::make_shared<SquareComplex>(corpus::grid(3, 3));
  StructureReport rg = analyze(*g);
  RaagWordOracle go(*g, rg);
  DevelopedBall d = develop_ball(*g, g->vertex_id("v1_1"), 3, go);

  Subcomplex left = region(d, {"v0_0", "v1_0", "v2_0"});
  Subcomplex right = region(d, {"v0_2", "v1_2", "v2_2"});
  BridgeReport rep = bridge_check(d, left, right);
  CHECK(rep.proj1 == left);
  CHECK(rep.proj2 == right);
  CHECK(rep.distance == 2);
  CHECK(rep.separators.size() == 2);
  CHECK(rep.pairing.size() == 3);
  CHECK(rep.bridge.vertex_count() == 9);
  for (auto [a, b] : rep.pairing)
    CHECK(d.to_base.v_img[a] / 4 == d.to_base.v_img[b] / 4);

  BridgeReport same = bridge_check(d, left, left);
  CHECK(same.distance == 0);
  CHECK(same.separators.empty());
  CHECK(same.proj1 == left);
  CHECK(same.bridge == left);

  // Convex sets meeting in a corner project onto the corner.
  Subcomplex top = region(d, {"v0_0", "v0_1", "v0_2"});
  BridgeReport corner = bridge_check(d, left, top);
  CHECK(corner.distance == 0);
  CHECK(corner.proj1.vertex_count() == 1);
  CHECK(corner.proj1.has_vertex(over(d, "v0_0")));

  auto tree = std::make_shared<SquareComplex>(corpus::path_tree(6));
  FreeReductionOracle fo(*tree);
  DevelopedBall dt = develop_ball(*tree, tree->vertex_id("t2"), 10, fo);
  BridgeReport geo = bridge_check(dt, region(dt, {"t0"}), region(dt, {"t5"}));
  CHECK(geo.distance == 5);
  CHECK(geo.bridge.vertex_count() == 6);
  CHECK(geo.separators.size() == 5);
}

TEST_CASE("the frontier walls carry disjoint separator certificates") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  RaagWordOracle to(*t, rt);
  DevelopedBall d = develop_ball(*t, t->vertex_id("v00"), 3, to);
  REQUIRE(d.ball->nv() == 49);

  DinfFrontier fr = dinf_frontier(d, d.center, 0);
  CHECK(fr.w.vertex_count() == 9);
  CHECK(fr.frontier.size() == 4);
  REQUIRE(fr.certificate.size() == fr.frontier.size());
  for (std::size_t i = 0; i < fr.frontier.size(); ++i) {
    const auto& fam = fr.certificate[i];
    CHECK(fam.size() == 1);
    for (std::size_t a = 0; a < fam.size(); ++a)
      for (std::size_t b = a + 1; b < fam.size(); ++b)
        CHECK_FALSE(d.walls.pair_intersects(fam[a], fam[b]));
    Subcomplex car = carrier(*d.ball, d.walls, fr.frontier[i]);
    for (HyperplaneId k : fam)
      for (VertexId u : car.vertices()) CHECK(d.separates(k, d.center, u));
  }

  DinfFrontier deeper = dinf_frontier(d, d.center, 1);
  CHECK(deeper.w.vertex_count() == 25);
  for (const auto& fam : deeper.certificate) CHECK(fam.size() == 2);

  auto r2 = std::make_shared<SquareComplex>(corpus::r2());
  FreeReductionOracle rf(*r2);
  DevelopedBall tr = develop_ball(*r2, r2->vertex_id("x"), 2, rf);
  DinfFrontier tfr = dinf_frontier(tr, tr.center, 0);
  CHECK(tfr.w.vertex_count() == 5);

  // Sup-metric distances count maximal disjoint separating families.
  auto g = std::make_shared<SquareComplex>(corpus::grid(3, 4));
  StructureReport rg = analyze(*g);
  RaagWordOracle go(*g, rg);
  DevelopedBall dg = develop_ball(*g, g->vertex_id("v1_1"), 5, go);
  CHECK(separating_walls(dg, over(dg, "v0_0"), over(dg, "v2_1")).size() == 3);
  CHECK(dinf(dg, over(dg, "v0_0"), over(dg, "v2_1")) == 2);
  CHECK(dinf(dg, over(dg, "v0_0"), over(dg, "v0_3")) == 3);
  CHECK(dinf(dg, over(dg, "v0_0"), over(dg, "v1_1")) == 1);

  CHECK_THROWS_AS(dinf_frontier(d, d.center, 2), StructuralError);
}
