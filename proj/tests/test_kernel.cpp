#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/corpus.hpp"
#include "cubical/io.hpp"
#include "cubical/maps.hpp"
#include "cubical/oracle.hpp"
#include "cubical/structure.hpp"

using namespace cubical;

namespace {

EdgePath P(const SquareComplex& x, const std::string& start, const std::string& names) {
  return path_from_names(x, x.vertex_id(start), parse_signed_names(names));
}

std::size_t count_kind(const StructureReport& r, EventKind k) {
  std::size_t n = 0;
  for (const auto& e : r.events) n += (e.kind == k) ? 1 : 0;
  return n;
}

bool failure_mentions(const StructureReport& r, const std::string& needle) {
  for (const auto& f : r.failures) {
    if (f.find(needle) != std::string::npos) return true;
  }
  return false;
}

// One loop edge filling a square on all four sides: its hyperplane carries
// a direction to its own reverse.
SquareComplex mobius_square() {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  EdgeId a = b.add_edge("a", x, x);
  b.add_square("s", {dir::fwd(a), dir::fwd(a), dir::fwd(a), dir::fwd(a)});
  return b.build();
}

// Loops a, b merged into one hyperplane by s2; s1 then crosses that
// hyperplane with itself.
SquareComplex self_crossing() {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  EdgeId a = b.add_edge("a", x, x);
  EdgeId bb = b.add_edge("b", x, x);
  EdgeId c = b.add_edge("c", x, x);
  b.add_square("s1", {dir::fwd(a), dir::fwd(bb), dir::make(a, false), dir::make(bb, false)});
  b.add_square("s2", {dir::fwd(a), dir::fwd(c), dir::make(bb, false), dir::make(c, false)});
  return b.build();
}

// Same merge without s1: the merged hyperplane meets itself at the vertex
// with no square corner between its two edges.
SquareComplex self_touching() {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  EdgeId a = b.add_edge("a", x, x);
  EdgeId bb = b.add_edge("b", x, x);
  EdgeId c = b.add_edge("c", x, x);
  b.add_square("s2", {dir::fwd(a), dir::fwd(c), dir::make(bb, false), dir::make(c, false)});
  return b.build();
}

void check_flip_witness(const SquareComplex& x, const StructureReport& r, const Hyperplane& h) {
  REQUIRE_FALSE(h.two_sided);
  const FlipWitness& w = h.flip;
  REQUIRE(w.dirs.size() == w.via.size() + 1);
  REQUIRE(w.dirs.size() >= 2);
  CHECK(w.dirs.front() == dir::rev(w.dirs.back()));
  for (std::uint32_t d : w.dirs) CHECK(r.hyperplane_of_edge[dir::edge(d)] == h.id);
  for (std::size_t i = 0; i < w.via.size(); ++i) {
    const Square& s = x.squares[w.via[i]];
    bool opposite = false;
    for (int k = 0; k < 4; ++k) {
      if ((s.side[k] == w.dirs[i] && dir::rev(s.side[(k + 2) % 4]) == w.dirs[i + 1]) ||
          (s.side[k] == w.dirs[i + 1] && dir::rev(s.side[(k + 2) % 4]) == w.dirs[i])) {
        opposite = true;
      }
    }
    CHECK(opposite);
  }
}

// Structural invariants every report must satisfy, independent of the
// complex.
void check_report_invariants(const SquareComplex& x, const StructureReport& r) {
  // Hyperplanes partition the edges, sorted member lists, canonical order.
  REQUIRE(r.hyperplane_of_edge.size() == x.ne());
  std::vector<char> seen(x.ne(), 0);
  for (std::size_t i = 0; i < r.hyperplanes.size(); ++i) {
    const Hyperplane& h = r.hyperplanes[i];
    CHECK(h.id == i);
    REQUIRE(!h.edges.empty());
    CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
    if (i + 1 < r.hyperplanes.size()) CHECK(h.edges[0] < r.hyperplanes[i + 1].edges[0]);
    for (EdgeId e : h.edges) {
      CHECK(!seen[e]);
      seen[e] = 1;
      CHECK(r.hyperplane_of_edge[e] == h.id);
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(x.ne()));

  // Side labels: defined exactly on member darts of two-sided classes, and
  // antisymmetric under reversal.
  REQUIRE(r.side_of_dir.size() == 2 * x.ne());
  for (EdgeId e = 0; e < x.ne(); ++e) {
    const Hyperplane& h = r.hyperplanes[r.hyperplane_of_edge[e]];
    if (h.two_sided) {
      CHECK(r.side_of_dir[2 * e] + r.side_of_dir[2 * e + 1] == 0);
      CHECK(r.side_of_dir[2 * e] != 0);
    } else {
      CHECK(r.side_of_dir[2 * e] == 0);
      CHECK(r.side_of_dir[2 * e + 1] == 0);
    }
  }
  // Elementary parallelism preserves the crossing direction.
  for (const Square& s : x.squares) {
    for (int k = 0; k < 4; ++k) {
      std::uint32_t d1 = s.side[k], d2 = dir::rev(s.side[(k + 2) % 4]);
      CHECK(r.hyperplane_of_edge[dir::edge(d1)] == r.hyperplane_of_edge[dir::edge(d2)]);
      CHECK(r.crossing_sign(d1) == r.crossing_sign(d2));
    }
  }

  // Events: exhaustive over unordered dart pairs at each vertex, sorted,
  // kinds consistent with corner / class data.
  std::size_t expect = 0;
  for (VertexId v = 0; v < x.nv(); ++v) {
    std::size_t d = x.darts_at(v).size();
    expect += d * (d - 1) / 2;
  }
  CHECK(r.events.size() == expect);
  for (std::size_t i = 0; i + 1 < r.events.size(); ++i) {
    const auto& a = r.events[i];
    const auto& b = r.events[i + 1];
    CHECK(std::make_tuple(a.at, a.dart1, a.dart2) < std::make_tuple(b.at, b.dart1, b.dart2));
  }
  for (const auto& ev : r.events) {
    CHECK(ev.dart1 < ev.dart2);
    CHECK(x.dart_vertex(ev.dart1) == ev.at);
    CHECK(x.dart_vertex(ev.dart2) == ev.at);
    HyperplaneId h1 = r.hyperplane_of_edge[dir::edge(ev.dart1)];
    HyperplaneId h2 = r.hyperplane_of_edge[dir::edge(ev.dart2)];
    CHECK(ev.h1 == std::min(h1, h2));
    CHECK(ev.h2 == std::max(h1, h2));
    bool corner = x.is_corner_pair(ev.at, ev.dart1, ev.dart2);
    EventKind want;
    if (corner) {
      want = (h1 == h2) ? EventKind::kSelfIntersect : EventKind::kIntersect;
    } else if (dir::edge(ev.dart1) == dir::edge(ev.dart2)) {
      want = EventKind::kLoopSelfOsculate;
    } else if (h1 == h2) {
      want = EventKind::kSelfOsculate;
    } else {
      want = EventKind::kOsculate;
    }
    CHECK(ev.kind == want);
  }

  // Loop edges list is exact.
  std::vector<EdgeId> loops;
  for (EdgeId e = 0; e < x.ne(); ++e) {
    if (x.is_loop(e)) loops.push_back(e);
  }
  CHECK(r.loop_edges == loops);

  // Verdict formula.
  bool all_two_sided = true;
  for (const auto& h : r.hyperplanes) all_two_sided = all_two_sided && h.two_sided;
  bool self_clean = true;
  for (const auto& ev : r.events) {
    if (ev.kind != EventKind::kIntersect && ev.kind != EventKind::kOsculate) self_clean = false;
  }
  bool want_special = r.npc && all_two_sided && self_clean &&
                      r.inter_osculating_pairs().empty() && r.loop_edges.empty();
  CHECK(r.directly_special == want_special);
  CHECK(r.directly_special == r.failures.empty());

  for (const auto& h : r.hyperplanes) {
    if (!h.two_sided) check_flip_witness(x, r, h);
  }
}

}  // namespace

TEST_CASE("builder validates structure") {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  VertexId y = b.add_vertex("y");
  EdgeId e = b.add_edge("e", x, y);
  EdgeId f = b.add_edge("f", x, y);
  SUBCASE("square boundary must chain") {
    b.add_square("s", {dir::fwd(e), dir::fwd(f), dir::rev(dir::fwd(e)), dir::rev(dir::fwd(f))});
    CHECK_THROWS_AS(b.build(), StructuralError);
  }
  SUBCASE("duplicate vertex name rejected at build") {
    b.add_vertex("x");
    CHECK_THROWS_AS(b.build(), StructuralError);
  }
  SUBCASE("duplicate edge name rejected at build") {
    b.add_edge("e", x, x);
    CHECK_THROWS_AS(b.build(), StructuralError);
  }
  SUBCASE("valid digon") {
    b.add_square("s", {dir::fwd(e), dir::rev(dir::fwd(f)), dir::fwd(f), dir::rev(dir::fwd(e))});
    SquareComplex c = b.build();
    CHECK(c.nv() == 2);
    CHECK(c.ne() == 2);
    CHECK(c.ns() == 1);
    CHECK(c.connected());
  }
}

TEST_CASE("name lookups and dart incidence") {
  SquareComplex t = corpus::torus_2x2();
  CHECK(t.vertex_id("v01") == 1);
  CHECK_THROWS_AS(t.edge_id("zzz"), StructuralError);
  CHECK(!t.try_edge_id("zzz").has_value());
  CHECK(t.try_vertex_id("v10").has_value());
  CHECK(t.dir_name(dir::fwd(t.edge_id("h00"))) == "h00");
  CHECK(t.dir_name(dir::rev(dir::fwd(t.edge_id("h00")))) == "-h00");
  for (VertexId v = 0; v < t.nv(); ++v) {
    CHECK(t.darts_at(v).size() == 4);
    CHECK(t.corners_at(v).size() == 4);
    for (std::uint32_t d : t.darts_at(v)) CHECK(t.dart_vertex(d) == v);
  }
  CHECK(t.all_corners().size() == 16);
}

TEST_CASE("edge paths") {
  SquareComplex r2 = corpus::r2();
  EdgePath p = P(r2, "x", "a1 a2 b1 -b1 -a2");
  p.validate(r2);
  CHECK(p.end(r2) == r2.vertex_id("a1"));
  CHECK_FALSE(p.is_closed(r2));
  EdgePath q = free_reduce(p);
  CHECK(q.steps.size() == 1);
  CHECK(path_names(r2, q) == "a1");
  EdgePath loop = P(r2, "x", "a1 a2");
  CHECK(loop.is_closed(r2));
  EdgePath rev = loop.reversed(r2);
  CHECK(path_names(r2, rev) == "-a2 -a1");
  EdgePath both = loop + rev;
  CHECK(free_reduce(both).empty());
  CHECK(path_vertices(r2, loop).size() == 3);
  CHECK_THROWS_AS(P(r2, "x", "a1 b1"), StructuralError);
}

TEST_CASE("subcomplex span, induced, materialize") {
  SquareComplex t = corpus::torus_2x2();
  Subcomplex sq = Subcomplex::span(t, {}, {}, {t.square_id("s00")});
  CHECK(sq.square_count() == 1);
  CHECK(sq.edge_count() == 4);
  CHECK(sq.vertex_count() == 4);
  CHECK(sq.closed_under_incidence());
  CHECK(sq.connected());

  std::vector<char> v_in(t.nv(), 0);
  v_in[t.vertex_id("v00")] = 1;
  v_in[t.vertex_id("v01")] = 1;
  Subcomplex row = Subcomplex::induced(t, v_in);
  CHECK(row == corpus::sub_by_edges(t, {"h00", "h01"}));
  CHECK(row.edge_count() == 2);
  CHECK(row.square_count() == 0);

  std::vector<VertexId> vmap;
  std::vector<EdgeId> emap;
  SquareComplex mat = sq.materialize(&vmap, &emap);
  CHECK(mat.nv() == 4);
  CHECK(mat.ns() == 1);
  CHECK(mat.vertex_name[vmap[t.vertex_id("v00")]] == "v00");
  CombinatorialMap inc = inclusion_map(mat, t, vmap, emap);
  MapCheck mc = check_map(inc);
  CHECK(mc.combinatorial);
  CHECK(mc.local_isometry);

  CHECK(Subcomplex::full(t).square_count() == 4);
  CHECK(Subcomplex::empty(t).vertex_count() == 0);
}

TEST_CASE("one-square torus structure") {
  SquareComplex x = corpus::one_square_torus();
  StructureReport r = analyze(x);
  check_report_invariants(x, r);
  REQUIRE(r.hyperplanes.size() == 2);
  CHECK(r.hyperplanes[0].two_sided);
  CHECK(r.hyperplanes[1].two_sided);
  CHECK(r.npc);
  CHECK(r.events.size() == 6);
  CHECK(count_kind(r, EventKind::kIntersect) == 4);
  CHECK(count_kind(r, EventKind::kLoopSelfOsculate) == 2);
  CHECK(r.loop_edges.size() == 2);
  CHECK_FALSE(r.directly_special);
  CHECK(failure_mentions(r, "edge loop"));
  CHECK_THROWS_AS(require_directly_special(x, r, "test complex"), PropertyViolation);
}

TEST_CASE("2x2 torus is directly special") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport r = analyze(t);
  check_report_invariants(t, r);
  REQUIRE(r.hyperplanes.size() == 4);
  for (const auto& h : r.hyperplanes) {
    CHECK(h.two_sided);
    CHECK(h.edges.size() == 2);
  }
  CHECK(r.npc);
  CHECK(r.directly_special);
  CHECK(r.events.size() == 24);
  CHECK(count_kind(r, EventKind::kIntersect) == 16);
  CHECK(count_kind(r, EventKind::kOsculate) == 8);
  CHECK(r.inter_osculating_pairs().empty());

  HyperplaneId col0 = r.hyperplane_of_edge[t.edge_id("h00")];
  HyperplaneId col1 = r.hyperplane_of_edge[t.edge_id("h01")];
  HyperplaneId row0 = r.hyperplane_of_edge[t.edge_id("u00")];
  HyperplaneId row1 = r.hyperplane_of_edge[t.edge_id("u10")];
  CHECK(r.hyperplane_of_edge[t.edge_id("h10")] == col0);
  CHECK(r.hyperplane_of_edge[t.edge_id("h11")] == col1);
  CHECK(r.pair_intersects(col0, row0));
  CHECK(r.pair_intersects(col1, row1));
  CHECK_FALSE(r.pair_intersects(col0, col1));
  CHECK(r.pair_osculates(col0, col1));
  CHECK(r.pair_osculates(row0, row1));
  CHECK_FALSE(r.pair_osculates(col0, row0));
  CHECK_NOTHROW(require_directly_special(t, r, "torus"));
}

TEST_CASE("subdivided rose is directly special") {
  SquareComplex x = corpus::r2();
  StructureReport r = analyze(x);
  check_report_invariants(x, r);
  CHECK(r.hyperplanes.size() == 4);
  CHECK(r.events.size() == 8);
  CHECK(count_kind(r, EventKind::kOsculate) == 8);
  CHECK(r.directly_special);
}

TEST_CASE("one-sided hyperplane carries a flip witness") {
  SquareComplex m = mobius_square();
  StructureReport r = analyze(m);
  check_report_invariants(m, r);
  REQUIRE(r.hyperplanes.size() == 1);
  CHECK_FALSE(r.hyperplanes[0].two_sided);
  CHECK_FALSE(r.npc);
  CHECK_FALSE(r.directly_special);
  CHECK(failure_mentions(r, "one-sided hyperplane"));
  CHECK(failure_mentions(r, "non-simple link"));
}

TEST_CASE("self-crossing and self-touching hyperplanes") {
  SquareComplex sx = self_crossing();
  StructureReport rx = analyze(sx);
  check_report_invariants(sx, rx);
  REQUIRE(rx.hyperplanes.size() == 2);
  CHECK(rx.npc);
  CHECK(count_kind(rx, EventKind::kSelfIntersect) == 4);
  CHECK(count_kind(rx, EventKind::kIntersect) == 4);
  CHECK(count_kind(rx, EventKind::kOsculate) == 4);
  CHECK(count_kind(rx, EventKind::kLoopSelfOsculate) == 3);
  CHECK(failure_mentions(rx, "self-intersect"));
  auto inter = rx.inter_osculating_pairs();
  REQUIRE(inter.size() == 1);
  CHECK(inter[0] == std::make_pair(HyperplaneId(0), HyperplaneId(1)));
  CHECK(failure_mentions(rx, "inter-osculation"));

  SquareComplex st = self_touching();
  StructureReport rt = analyze(st);
  check_report_invariants(st, rt);
  CHECK(count_kind(rt, EventKind::kSelfOsculate) == 4);
  CHECK(count_kind(rt, EventKind::kSelfIntersect) == 0);
  CHECK(failure_mentions(rt, "self-osculate"));
}

TEST_CASE("analyze agrees with the reference classifier") {
  std::vector<corpus::NamedComplex> all = corpus::analysis_corpus();
  auto add = [&all](const std::string& n, SquareComplex x) {
    all.push_back({n, std::make_shared<SquareComplex>(std::move(x))});
  };
  add("grid-2x3", corpus::grid(2, 3));
  add("binary-tree-2", corpus::binary_tree(2));
  add("mobius", mobius_square());
  add("self-crossing", self_crossing());
  add("self-touching", self_touching());
  add("subdivided-torus", subdivide(corpus::torus_2x2()));
  for (const auto& nc : all) {
    CAPTURE(nc.name);
    StructureReport a = analyze(*nc.x);
    StructureReport b = analyze_reference(*nc.x);
    CHECK(same_verdicts(a, b));
    check_report_invariants(*nc.x, a);
  }
}

TEST_CASE("carrier of a hyperplane") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport r = analyze(t);
  HyperplaneId row0 = r.hyperplane_of_edge[t.edge_id("u00")];
  Subcomplex car = carrier(t, r, row0);
  CHECK(car.vertex_count() == 4);
  CHECK(car.edge_count() == 6);
  CHECK(car.square_count() == 2);
  CHECK(car.has_edge(t.edge_id("u00")));
  CHECK(car.has_edge(t.edge_id("u01")));
  CHECK_FALSE(car.has_edge(t.edge_id("u10")));
  CHECK(car.has_square(t.square_id("s00")));
  CHECK(car.has_square(t.square_id("s01")));
  CHECK(locally_convex(car));

  HyperplaneId col0 = r.hyperplane_of_edge[t.edge_id("h00")];
  Subcomplex car2 = carrier(t, r, col0);
  CHECK(car2.square_count() == 2);
  CHECK(car2.has_square(t.square_id("s00")));
  CHECK(car2.has_square(t.square_id("s10")));
}

TEST_CASE("local convexity witnesses") {
  SquareComplex t = corpus::torus_2x2();
  CHECK(locally_convex(Subcomplex::full(t)));
  CHECK(locally_convex(Subcomplex::empty(t)));
  CHECK(locally_convex(corpus::sub_by_edges(t, {"h00", "h01"})));
  Subcomplex bad = corpus::sub_by_edges(t, {"h00", "u01"});
  CHECK_FALSE(locally_convex(bad));
  CHECK(locally_convex_witness(bad).find("s00") != std::string::npos);
  CHECK(locally_convex_witness(Subcomplex::full(t)).empty());

  SquareComplex g = corpus::grid(2, 2);
  Subcomplex diag =
      Subcomplex::span(g, {}, {}, {g.square_id("s0_0"), g.square_id("s1_1")});
  CHECK_FALSE(locally_convex(diag));
  Subcomplex strip =
      Subcomplex::span(g, {}, {}, {g.square_id("s0_0"), g.square_id("s0_1")});
  CHECK(locally_convex(strip));
}

TEST_CASE("map validation catches defects") {
  SquareComplex t = corpus::torus_2x2();
  corpus::Inclusion inc =
      corpus::make_inclusion("row", t, corpus::sub_by_edges(t, {"h00", "h01"}));
  MapCheck mc = check_map(inc.map);
  CHECK(mc.combinatorial);
  CHECK(mc.local_isometry);

  SUBCASE("endpoint mismatch") {
    CombinatorialMap m = inc.map;
    m.v_img[inc.sub->vertex_id("v01")] = t.vertex_id("v11");
    CHECK_THROWS_AS(m.validate(), StructuralError);
    CHECK_FALSE(check_map(m).combinatorial);
  }
  SUBCASE("square image must be a square boundary") {
    SquareComplex t1 = corpus::one_square_torus();
    CombinatorialMap m;
    m.domain = &t1;
    m.codomain = &t1;
    m.v_img = {0};
    m.e_img = {dir::fwd(t1.edge_id("a")), dir::fwd(t1.edge_id("a"))};
    CHECK_THROWS_AS(m.validate(), StructuralError);
  }
  SUBCASE("orientation-reversing square image is legal") {
    SquareComplex t1 = corpus::one_square_torus();
    CombinatorialMap m;
    m.domain = &t1;
    m.codomain = &t1;
    m.v_img = {0};
    m.e_img = {dir::fwd(t1.edge_id("a")), dir::rev(dir::fwd(t1.edge_id("b")))};
    CHECK_NOTHROW(m.validate());
    CHECK(m.s_img.size() == 1);
  }
}

TEST_CASE("local isometry checks") {
  SquareComplex t = corpus::torus_2x2();
  CHECK(check_map(identity_map(t)).local_isometry);

  SquareComplex p3 = corpus::path_tree(3);
  SquareComplex rose1 = corpus::rose(1);
  SUBCASE("folding two darts onto one") {
    CombinatorialMap m;
    m.domain = &p3;
    m.codomain = &rose1;
    m.v_img = {0, 0, 0};
    m.e_img = {dir::fwd(0), dir::make(0, false)};
    MapCheck mc = check_map(m);
    CHECK(mc.combinatorial);
    CHECK_FALSE(mc.local_isometry);
    CHECK(!mc.witnesses.empty());
    CHECK_THROWS_AS(require_local_isometry(m, "fold"), PropertyViolation);
  }
  SUBCASE("missing corner upstairs") {
    CombinatorialMap m;
    m.domain = &p3;
    m.codomain = &t;
    m.v_img = {t.vertex_id("v00"), t.vertex_id("v01"), t.vertex_id("v11")};
    m.e_img = {dir::fwd(t.edge_id("h00")), dir::fwd(t.edge_id("u01"))};
    MapCheck mc = check_map(m);
    CHECK(mc.combinatorial);
    CHECK_FALSE(mc.local_isometry);
  }
  SUBCASE("subdivided rose onto rose") {
    SquareComplex r2 = corpus::r2();
    SquareComplex rose2 = corpus::rose(2);
    CombinatorialMap m;
    m.domain = &r2;
    m.codomain = &rose2;
    m.v_img = {0, 0, 0};
    m.e_img = {dir::fwd(0), dir::fwd(0), dir::fwd(1), dir::fwd(1)};
    MapCheck mc = check_map(m);
    CHECK(mc.combinatorial);
    CHECK(mc.local_isometry);
  }
}

TEST_CASE("map application and composition") {
  SquareComplex t = corpus::torus_2x2();
  corpus::Inclusion inc =
      corpus::make_inclusion("row", t, corpus::sub_by_edges(t, {"h00", "h01"}));
  EdgePath loop = P(*inc.sub, "v00", "h00 h01");
  EdgePath img = inc.map.apply_path(loop);
  CHECK(img.start == t.vertex_id("v00"));
  CHECK(img.is_closed(t));
  CHECK(path_names(t, img) == "h00 h01");
  CombinatorialMap comp = compose(inc.map, identity_map(t));
  CHECK(comp.v_img == inc.map.v_img);
  CHECK(comp.e_img == inc.map.e_img);
}

TEST_CASE("hyperplane relation along an inclusion") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport rt = analyze(t);
  HyperplaneId col0 = rt.hyperplane_of_edge[t.edge_id("h00")];
  HyperplaneId row0 = rt.hyperplane_of_edge[t.edge_id("u00")];
  HyperplaneId row1 = rt.hyperplane_of_edge[t.edge_id("u10")];

  corpus::Inclusion yh =
      corpus::make_inclusion("yh", t, corpus::sub_by_edges(t, {"h00", "h01"}));
  StructureReport ryh = analyze(*yh.sub);

  // Osculation pairs are (domain vertex; codomain edge).
  HyperplaneRelation rel = complex_hyperplane_relation(yh.map, ryh, rt, row0);
  CHECK_FALSE(rel.intersects);
  CHECK_FALSE(rel.inter_osculates);
  std::vector<std::pair<VertexId, EdgeId>> want = {{yh.sub->vertex_id("v00"), t.edge_id("u00")},
                                                   {yh.sub->vertex_id("v01"), t.edge_id("u01")}};
  CHECK(rel.osculations == want);

  rel = complex_hyperplane_relation(yh.map, ryh, rt, row1);
  CHECK_FALSE(rel.intersects);
  want = {{yh.sub->vertex_id("v00"), t.edge_id("u10")}, {yh.sub->vertex_id("v01"), t.edge_id("u11")}};
  CHECK(rel.osculations == want);

  rel = complex_hyperplane_relation(yh.map, ryh, rt, col0);
  CHECK(rel.intersects);
  CHECK(rel.osculations.empty());
  CHECK_FALSE(rel.inter_osculates);

  corpus::Inclusion yv =
      corpus::make_inclusion("yv", t, corpus::sub_by_edges(t, {"u00", "u10"}));
  StructureReport ryv = analyze(*yv.sub);
  rel = complex_hyperplane_relation(yv.map, ryv, rt, row0);
  CHECK(rel.intersects);
  CHECK(rel.osculations.empty());
  rel = complex_hyperplane_relation(yv.map, ryv, rt, col0);
  CHECK_FALSE(rel.intersects);
  want = {{yv.sub->vertex_id("v00"), t.edge_id("h00")}, {yv.sub->vertex_id("v10"), t.edge_id("h10")}};
  CHECK(rel.osculations == want);

  corpus::Inclusion pt = corpus::make_inclusion("pt", t, corpus::sub_by_vertex(t, "v00"));
  StructureReport rpt = analyze(*pt.sub);
  for (HyperplaneId h = 0; h < 4; ++h) {
    rel = complex_hyperplane_relation(pt.map, rpt, rt, h);
    CHECK_FALSE(rel.intersects);
    CHECK(rel.osculations.size() == 1);
  }
}

TEST_CASE("wall projections in the torus") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport rt = analyze(t);
  RaagWordOracle oracle(t, rt);
  Subcomplex yh = corpus::sub_by_edges(t, {"h00", "h01"});
  Subcomplex yv = corpus::sub_by_edges(t, {"u00", "u10"});

  WallProjection w1 = wall_projection(t, rt, yv, yh, &oracle);
  CHECK(w1.wproj.vertex_count() == 2);
  CHECK(w1.wproj.edge_count() == 0);
  REQUIRE(w1.trivial.has_value());
  CHECK(*w1.trivial);
  CHECK_FALSE(w1.essential_loop.has_value());

  WallProjection w2 = wall_projection(t, rt, yh, yh, &oracle);
  CHECK(w2.wproj == yh);
  REQUIRE(w2.trivial.has_value());
  CHECK_FALSE(*w2.trivial);
  REQUIRE(w2.essential_loop.has_value());
  CHECK(w2.essential_loop->is_closed(t));
  CHECK_FALSE(oracle.trivial(*w2.essential_loop));

  WallProjection w3 = wall_projection(t, rt, Subcomplex::full(t), yh, nullptr);
  CHECK(w3.wproj == yh);
  CHECK_FALSE(w3.trivial.has_value());

  HyperplaneId row0 = rt.hyperplane_of_edge[t.edge_id("u00")];
  WallProjection w4 = wall_projection(t, rt, carrier(t, rt, row0), yv, &oracle);
  CHECK(w4.wproj.edge_count() == 1);
  CHECK(w4.wproj.has_edge(t.edge_id("u00")));
  REQUIRE(w4.trivial.has_value());
  CHECK(*w4.trivial);
}

TEST_CASE("subdivision") {
  SquareComplex t = corpus::torus_2x2();
  SquareComplex st = subdivide(t);
  CHECK(st.nv() == t.nv() + t.ne() + t.ns());
  CHECK(st.ne() == 2 * t.ne() + 4 * t.ns());
  CHECK(st.ns() == 4 * t.ns());
  StructureReport r = analyze(st);
  CHECK(r.directly_special);
  CHECK(r.hyperplanes.size() == 8);
  for (const auto& h : r.hyperplanes) CHECK(h.edges.size() == 4);

  CHECK(corpus::isomorphic(subdivide(corpus::rose(2)), corpus::r2()));
  CHECK(corpus::isomorphic(subdivide(corpus::grid(1, 1)), corpus::grid(2, 2)));
  CHECK_FALSE(corpus::isomorphic(t, st));

  // Subdividing removes loop edges and even restores two-sidedness here
  // (the halves point into opposite sides), but the non-simple link of the
  // all-sides loop square survives at the original vertex.
  SquareComplex sm = subdivide(mobius_square());
  StructureReport rm = analyze(sm);
  CHECK(rm.loop_edges.empty());
  CHECK_FALSE(rm.npc);
  REQUIRE(rm.hyperplanes.size() == 1);
  CHECK(rm.hyperplanes[0].edges.size() == 6);
  CHECK(rm.hyperplanes[0].two_sided);
  CHECK_FALSE(rm.directly_special);
}

TEST_CASE("crossing graph of the torus") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport r = analyze(t);
  raag::DefGraph g = crossing_graph(t, r);
  REQUIRE(g.rank() == 4);
  CHECK(g.valid());
  CHECK(g.gen_names == std::vector<std::string>{"h00", "u00", "h01", "u10"});
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(0, 3));
  CHECK(g.adjacent(2, 1));
  CHECK(g.adjacent(2, 3));
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK_FALSE(g.adjacent(1, 3));
}

TEST_CASE("crossing word oracle on the torus") {
  SquareComplex t = corpus::torus_2x2();
  StructureReport rt = analyze(t);
  RaagWordOracle oracle(t, rt);
  EdgePath hloop = P(t, "v00", "h00 h01");
  EdgePath uloop = P(t, "v00", "u00 u10");
  CHECK_FALSE(oracle.trivial(hloop));
  CHECK_FALSE(oracle.trivial(uloop));
  EdgePath comm = hloop + uloop + hloop.reversed(t) + uloop.reversed(t);
  CHECK(oracle.trivial(comm));
  CHECK(oracle.same_class(hloop + uloop, uloop + hloop));
  CHECK_FALSE(oracle.same_class(hloop, uloop));
  CHECK(oracle.crossing_word(hloop).size() == 2);
  CHECK_THROWS_AS(oracle.trivial(P(t, "v00", "h00")), StructuralError);

  AbelianCrossingOracle ab(t, rt);
  CHECK_FALSE(ab.trivial(hloop));
  CHECK(ab.trivial(comm));
  std::vector<long long> counts = ab.crossing_counts(hloop);
  CHECK(std::count(counts.begin(), counts.end(), 0) == 2);

  HomotopyBfsOracle bfs(t, 16);
  CHECK(bfs.trivial(comm));
  HomotopyBfsOracle tight(t, 4, Budgets{1000000, 2000});
  CHECK_THROWS_AS(tight.trivial(hloop), BudgetError);
}

TEST_CASE("oracle preconditions") {
  SquareComplex t1 = corpus::one_square_torus();
  StructureReport r1 = analyze(t1);
  CHECK_THROWS_AS(RaagWordOracle(t1, r1), PropertyViolation);

  SquareComplex t = corpus::torus_2x2();
  CHECK_THROWS_AS(FreeReductionOracle{t}, StructuralError);

  SquareComplex m = mobius_square();
  StructureReport rm = analyze(m);
  CHECK_THROWS_AS(AbelianCrossingOracle(m, rm), StructuralError);
}

TEST_CASE("free reduction oracle on a square-free complex") {
  SquareComplex r2 = corpus::r2();
  FreeReductionOracle oracle(r2);
  EdgePath a = P(r2, "x", "a1 a2");
  EdgePath b = P(r2, "x", "b1 b2");
  CHECK_FALSE(oracle.trivial(a));
  CHECK(oracle.trivial(a + a.reversed(r2)));
  CHECK_FALSE(oracle.same_class(a, b));
  CHECK(oracle.same_class(a, P(r2, "x", "a1 -a1 a1 a2")));
}

TEST_CASE("subcomplex enumeration") {
  SquareComplex g = corpus::grid(1, 1);
  std::vector<Subcomplex> subs = corpus::all_subcomplexes(g);
  CHECK(subs.size() == 48);
  std::set<std::pair<std::vector<char>, std::pair<std::vector<char>, std::vector<char>>>> uniq;
  for (const Subcomplex& s : subs) {
    CHECK(s.closed_under_incidence());
    uniq.insert({s.v_in, {s.e_in, s.s_in}});
  }
  CHECK(uniq.size() == subs.size());
  CHECK_THROWS_AS(corpus::all_subcomplexes(corpus::grid(3, 3)), BudgetError);
}

TEST_CASE("isomorphism checker") {
  CHECK(corpus::isomorphic(corpus::rose(2), raag::salvetti(raag::DefGraph::discrete({"a", "b"}))));
  CHECK(corpus::isomorphic(corpus::one_square_torus(),
                           raag::salvetti(raag::DefGraph::complete({"p", "q"}))));
  CHECK(corpus::isomorphic(corpus::grid(1, 2), corpus::grid(2, 1)));
  CHECK_FALSE(corpus::isomorphic(corpus::rose(2), corpus::rose(3)));
  CHECK_FALSE(corpus::isomorphic(corpus::grid(1, 2), corpus::path_tree(6)));
}
