#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/corpus.hpp"
#include "cubical/covers.hpp"
#include "cubical/hier.hpp"
#include "cubical/imitator.hpp"
#include "cubical/maps.hpp"
#include "cubical/structure.hpp"

using namespace cubical;

namespace {

using Seq = std::vector<std::uint32_t>;

EdgePath random_path(const SquareComplex& x, VertexId start, std::size_t len, std::mt19937& rng) {
  EdgePath p;
  p.start = start;
  VertexId v = start;
  for (std::size_t i = 0; i < len; ++i) {
    const auto& darts = x.darts_at(v);
    std::uint32_t d = darts[rng() % darts.size()];
    p.steps.push_back(d);
    v = x.head(d);
  }
  return p;
}

// Random walk staying on the edges of one subcomplex.
EdgePath random_sub_path(const Subcomplex& y, VertexId start, std::size_t len, std::mt19937& rng) {
  const SquareComplex& x = *y.parent;
  EdgePath p;
  p.start = start;
  VertexId v = start;
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::uint32_t> inside;
    for (std::uint32_t d : x.darts_at(v))
      if (y.has_edge(dir::edge(d))) inside.push_back(d);
    if (inside.empty()) break;
    std::uint32_t d = inside[rng() % inside.size()];
    p.steps.push_back(d);
    v = x.head(d);
  }
  return p;
}

Subcomplex image_overlap(const HierCover& hc, const std::vector<std::size_t>& members) {
  Subcomplex inter = Subcomplex::full(*hc.cover.total);
  for (std::size_t i : members) {
    for (std::size_t v = 0; v < inter.v_in.size(); ++v) inter.v_in[v] &= hc.image[i].v_in[v];
    for (std::size_t e = 0; e < inter.e_in.size(); ++e) inter.e_in[e] &= hc.image[i].e_in[e];
    for (std::size_t s = 0; s < inter.s_in.size(); ++s) inter.s_in[s] &= hc.image[i].s_in[s];
  }
  return inter;
}

}  // namespace

TEST_CASE("distinct index sequences come in length-lex order") {
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  HierSystem sys = hier_system(
      *x, rx,
      {corpus::sub_by_edges(*x, {"a1"}), corpus::sub_by_edges(*x, {"a2"}),
       corpus::sub_by_edges(*x, {"b1"})});

  CHECK(sys.nseq() == 15);
  CHECK(sys.seqs[0] == Seq{0});
  CHECK(sys.seqs[1] == Seq{1});
  CHECK(sys.seqs[2] == Seq{2});
  CHECK(sys.seqs[3] == Seq{0, 1});
  CHECK(sys.seqs[8] == Seq{2, 1});
  CHECK(sys.seqs[9] == Seq{0, 1, 2});
  CHECK(sys.seqs[14] == Seq{2, 1, 0});
  for (std::size_t k = 0; k + 1 < sys.nseq(); ++k)
    CHECK(sys.seqs[k].size() <= sys.seqs[k + 1].size());
  for (std::size_t k = 0; k < sys.nseq(); ++k) {
    if (sys.seqs[k].size() == 1) {
      CHECK(sys.suffix_of[k] == kNone);
    } else {
      REQUIRE(sys.suffix_of[k] < k);
      CHECK(sys.seqs[sys.suffix_of[k]] == Seq(sys.seqs[k].begin() + 1, sys.seqs[k].end()));
    }
  }
  CHECK(sys.seq_index({2, 0}) == 7);
  CHECK(sys.seq_index({0, 0}) == kNone);

  CHECK(collapse_sequence({0, 1, 1, 3, 0, 3}) == Seq{1, 0, 3});
  CHECK(collapse_sequence({0, 1, 2}) == Seq{0, 1, 2});
  CHECK(collapse_sequence({2, 2, 2}) == Seq{2});
  CHECK(collapse_sequence({}) == Seq{});
}

TEST_CASE("transitions copy the tail of the sequence") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  HierSystem sys = hier_system(*t, rt,
                               {corpus::sub_by_edges(*t, {"h00", "h01"}),
                                corpus::sub_by_edges(*t, {"u00", "u10"})});
  HierState st = initial_state(sys, t->vertex_id("v00"));
  REQUIRE(sys.nseq() == 4);

  // Horizontal step: only the horizontal circle itself can follow. The
  // sequence (0,1) copies (1), which stays, and (1,0) has no dual dart.
  std::uint32_t h00 = dir::fwd(t->edge_id("h00"));
  HierStep stp = hier_transition(sys, st, h00);
  CHECK(stp.moved[sys.seq_index({0})] == h00);
  CHECK(stp.moved[sys.seq_index({1})] == kNone);
  CHECK(stp.moved[sys.seq_index({0, 1})] == kNone);
  CHECK(stp.moved[sys.seq_index({1, 0})] == kNone);
  CHECK(stp.next.walker == t->vertex_id("v01"));
  CHECK(stp.next.theta[sys.seq_index({0})] == t->vertex_id("v01"));
  CHECK(stp.next.theta[sys.seq_index({1})] == t->vertex_id("v00"));

  std::uint32_t u00 = dir::fwd(t->edge_id("u00"));
  stp = hier_transition(sys, st, u00);
  CHECK(stp.moved[sys.seq_index({0})] == kNone);
  CHECK(stp.moved[sys.seq_index({1})] == u00);
  CHECK(stp.moved[sys.seq_index({0, 1})] == kNone);
  CHECK(stp.moved[sys.seq_index({1, 0})] == kNone);

  // A walker dart lying on every member is copied by the whole hierarchy.
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  HierSystem shared = hier_system(
      *x, rx, {corpus::sub_by_edges(*x, {"a1", "a2"}), corpus::sub_by_edges(*x, {"a1"})});
  std::uint32_t a1 = dir::fwd(x->edge_id("a1"));
  HierStep all = hier_transition(shared, initial_state(shared, x->vertex_id("x")), a1);
  for (std::size_t k = 0; k < shared.nseq(); ++k) {
    CHECK(all.moved[k] == a1);
    CHECK(all.next.theta[k] == x->vertex_id("a1"));
  }
}

TEST_CASE("the state machine agrees with the recursive cascade") {
  std::mt19937 rng(20260816);

  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  HierSystem tor = hier_system(*t, rt,
                               {corpus::sub_by_edges(*t, {"h00", "h01"}),
                                corpus::sub_by_edges(*t, {"u00", "u10"})});
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  HierSystem arcs = hier_system(
      *x, rx, {corpus::sub_by_edges(*x, {"a1"}), corpus::sub_by_edges(*x, {"a2"})});

  auto agree = [&](const HierSystem& sys, VertexId base) {
    for (int round = 0; round < 40; ++round) {
      EdgePath walk = random_path(*sys.x, base, 1 + rng() % 8, rng);
      HierTranscript tr = hier_run(sys, walk, base);
      CHECK(tr.end.walker == walk.end(*sys.x));
      for (std::size_t k = 0; k < sys.nseq(); ++k) {
        EdgePath direct = hier_delta(sys, sys.seqs[k], walk, base);
        CHECK(tr.delta[k].steps == direct.steps);
        CHECK(tr.end.theta[k] == direct.end(*sys.x));
      }
    }
  };
  agree(tor, t->vertex_id("v00"));
  agree(arcs, x->vertex_id("x"));
}

TEST_CASE("hierarchy runs split, collapse, and stay trapped") {
  std::mt19937 rng(424242);

  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  HierSystem tor = hier_system(*t, rt,
                               {corpus::sub_by_edges(*t, {"h00", "h01"}),
                                corpus::sub_by_edges(*t, {"u00", "u10"})});
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  HierSystem three = hier_system(
      *x, rx,
      {corpus::sub_by_edges(*x, {"a1"}), corpus::sub_by_edges(*x, {"a2"}),
       corpus::sub_by_edges(*x, {"b1"})});

  auto drill = [&](const HierSystem& sys, VertexId base) {
    std::size_t n = sys.ys.size();
    for (int round = 0; round < 30; ++round) {
      EdgePath walk = random_path(*sys.x, base, 1 + rng() % 8, rng);

      // Splitting the sequence threads one run through the other.
      for (const Seq& s : sys.seqs) {
        EdgePath whole = hier_delta(sys, s, walk, base);
        for (std::size_t p = 0; p + 1 < s.size(); ++p) {
          Seq outer(s.begin(), s.begin() + p + 1);
          Seq inner(s.begin() + p + 1, s.end());
          EdgePath threaded = hier_delta(sys, outer, hier_delta(sys, inner, walk, base), base);
          CHECK(threaded.steps == whole.steps);
        }
        // The run stays inside every member named by its sequence.
        for (std::uint32_t i : s) {
          for (VertexId v : path_vertices(*sys.x, whole)) CHECK(sys.ys[i].has_vertex(v));
          for (std::uint32_t d : whole.steps) CHECK(sys.ys[i].has_edge(dir::edge(d)));
        }
      }

      // Repeated indices collapse onto the rightmost occurrences.
      for (int trial = 0; trial < 8; ++trial) {
        Seq seq(1 + rng() % 5);
        for (auto& v : seq) v = rng() % n;
        EdgePath full = hier_delta(sys, seq, walk, base);
        EdgePath collapsed = hier_delta(sys, collapse_sequence(seq), walk, base);
        CHECK(full.steps == collapsed.steps);
      }

      // Appending a member whose edges carry the walk changes nothing.
      for (std::uint32_t j = 0; j < n; ++j) {
        EdgePath inside = random_sub_path(sys.ys[j], base, 1 + rng() % 6, rng);
        if (inside.empty()) continue;
        for (const Seq& s : sys.seqs) {
          Seq extended = s;
          extended.push_back(j);
          CHECK(hier_delta(sys, extended, inside, base).steps ==
                hier_delta(sys, s, inside, base).steps);
        }
      }
    }
  };
  drill(tor, t->vertex_id("v00"));
  drill(three, x->vertex_id("x"));
}

TEST_CASE("the two arc halves meet connectedly upstairs") {
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  Subcomplex left = corpus::sub_by_edges(*x, {"a1"});
  Subcomplex right = corpus::sub_by_edges(*x, {"a2"});

  // Downstairs the two halves of the circle meet in both endpoints.
  Subcomplex down = left;
  for (std::size_t v = 0; v < down.v_in.size(); ++v) down.v_in[v] &= right.v_in[v];
  for (std::size_t e = 0; e < down.e_in.size(); ++e) down.e_in[e] &= right.e_in[e];
  REQUIRE(down.vertex_count() == 2);
  REQUIRE_FALSE(down.connected());

  HierSystem sys = hier_system(*x, rx, {left, right});
  HierCover hc = hier_cover(sys, x->vertex_id("x"));
  CHECK(hc.cover.degree() == 2);
  CHECK(hc.cover.total->nv() == 6);
  CHECK(hc.cover.total->ne() == 8);
  CHECK(hc.cover.total->ns() == 0);

  // Each arc lifts whole, and the lifts now share only the base vertex.
  for (int i = 0; i < 2; ++i) {
    CHECK(hc.elevation[i].total->nv() == 2);
    CHECK(hc.elevation[i].total->ne() == 1);
    CHECK(hc.elevation[i].base != kNone);
  }
  Subcomplex up = image_overlap(hc, {0, 1});
  CHECK(up.vertex_count() == 1);
  CHECK(up.edge_count() == 0);
  CHECK(up.has_vertex(hc.cover.base_total));
}

TEST_CASE("a single member reproduces the canonical completion") {
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  corpus::Inclusion inc = corpus::make_inclusion("path", *x, corpus::sub_by_edges(*x, {"a1"}));
  ImitatorContext ctx{&inc.map, &rx};
  ImitatorCover ic = imitator_cover(ctx, inc.sub->vertex_id("x"));

  HierSystem sys = hier_system(*x, rx, {corpus::sub_by_edges(*x, {"a1"})});
  REQUIRE(sys.nseq() == 1);
  HierCover hc = hier_cover(sys, x->vertex_id("x"));
  CHECK(hc.cover.degree() == ic.cover.degree());
  CHECK(hc.cover.degree() == 2);
  CHECK(corpus::isomorphic(*hc.cover.total, *ic.cover.total));
}

TEST_CASE("hierarchies of full circles stay degree one") {
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  HierSystem tor = hier_system(*t, rt,
                               {corpus::sub_by_edges(*t, {"h00", "h01"}),
                                corpus::sub_by_edges(*t, {"u00", "u10"})});
  HierCover ht = hier_cover(tor, t->vertex_id("v00"));
  CHECK(ht.cover.degree() == 1);
  CHECK(corpus::isomorphic(*ht.cover.total, *t));
  Subcomplex cross = image_overlap(ht, {0, 1});
  CHECK(cross.vertex_count() == 1);
  CHECK(cross.edge_count() == 0);

  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  HierSystem wedge = hier_system(
      *x, rx,
      {corpus::sub_by_edges(*x, {"a1", "a2"}), corpus::sub_by_edges(*x, {"b1", "b2"})});
  HierCover hw = hier_cover(wedge, x->vertex_id("x"));
  CHECK(hw.cover.degree() == 1);
  CHECK(corpus::isomorphic(*hw.cover.total, *x));
  Subcomplex point = image_overlap(hw, {0, 1});
  CHECK(point.vertex_count() == 1);
  CHECK(point.has_vertex(hw.cover.base_total));
}

TEST_CASE("hierarchy preconditions are enforced") {
  auto x = std::make_shared<SquareComplex>(corpus::r2());
  StructureReport rx = analyze(*x);
  CHECK_THROWS_AS(hier_system(*x, rx, {}), StructuralError);

  HierSystem arcs = hier_system(
      *x, rx, {corpus::sub_by_edges(*x, {"a1"}), corpus::sub_by_edges(*x, {"b1"})});
  CHECK_THROWS_AS(initial_state(arcs, x->vertex_id("b1")), StructuralError);
  CHECK_THROWS_AS(hier_cover(arcs, x->vertex_id("b1")), StructuralError);
  CHECK_THROWS_AS(hier_delta(arcs, {}, EdgePath{x->vertex_id("x"), {}}, x->vertex_id("x")),
                  StructuralError);
  CHECK_THROWS_AS(hier_delta(arcs, {7}, EdgePath{x->vertex_id("x"), {}}, x->vertex_id("x")),
                  StructuralError);

  // A bent pair of edges misses its square, so it is not locally convex.
  auto t = std::make_shared<SquareComplex>(corpus::torus_2x2());
  StructureReport rt = analyze(*t);
  Subcomplex bent = corpus::sub_by_edges(*t, {"h00", "u00"});
  REQUIRE_FALSE(locally_convex(bent));
  CHECK_THROWS_AS(hier_system(*t, rt, {bent}), StructuralError);

  HierSystem halves = hier_system(
      *x, rx, {corpus::sub_by_edges(*x, {"a1"}), corpus::sub_by_edges(*x, {"a2"})});
  CHECK_THROWS_AS(hier_cover(halves, x->vertex_id("x"), Budgets{3, 100000}), BudgetError);
}
