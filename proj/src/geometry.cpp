#include "cubical/geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace cubical {

namespace {

constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> dists_from(const SquareComplex& c, VertexId v0) {
  std::vector<std::size_t> dv(c.nv(), kFar);
  std::vector<VertexId> queue{v0};
  dv[v0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId v = queue[head];
    for (std::uint32_t d : c.darts_at(v)) {
      VertexId w = c.head(d);
      if (dv[w] != kFar) continue;
      dv[w] = dv[v] + 1;
      queue.push_back(w);
    }
  }
  return dv;
}

// Maximum pairwise-non-crossing subfamily, exact by branch and bound; the
// candidate sets here are tiny (bounded by a ball diameter).
void grow_antichain(const StructureReport& walls, const std::vector<HyperplaneId>& cand,
                    std::size_t idx, std::vector<HyperplaneId>& cur,
                    std::vector<HyperplaneId>& best) {
  if (cur.size() > best.size()) best = cur;
  if (idx == cand.size() || cur.size() + (cand.size() - idx) <= best.size()) return;
  bool fits = true;
  for (HyperplaneId h : cur)
    if (walls.pair_intersects(h, cand[idx])) {
      fits = false;
      break;
    }
  if (fits) {
    cur.push_back(cand[idx]);
    grow_antichain(walls, cand, idx + 1, cur, best);
    cur.pop_back();
  }
  grow_antichain(walls, cand, idx + 1, cur, best);
}

std::vector<HyperplaneId> max_antichain(const StructureReport& walls,
                                        const std::vector<HyperplaneId>& cand) {
  std::vector<HyperplaneId> cur, best;
  grow_antichain(walls, cand, 0, cur, best);
  return best;
}

bool wall_crosses(const Subcomplex& s, const StructureReport& walls, HyperplaneId h) {
  for (EdgeId e : walls.hyperplanes[h].edges)
    if (s.has_edge(e)) return true;
  return false;
}

void require_convex_region(const DevelopedBall& d, const Subcomplex& y, const std::string& role) {
  if (y.parent != d.ball.get()) throw StructuralError(role + " is not a subcomplex of the ball");
  if (y.vertex_count() == 0) throw StructuralError(role + " is empty");
  if (!y.connected()) throw StructuralError(role + " is disconnected");
  if (!locally_convex(y))
    throw StructuralError(role + " is not convex: " + locally_convex_witness(y));
}

}  // namespace

DevelopedBall develop_ball(const SquareComplex& x, VertexId base, std::size_t radius,
                           const WordOracle& oracle, Budgets budgets) {
  if (base >= x.nv()) throw StructuralError("development base vertex out of range");

  std::vector<EdgePath> rep;
  std::vector<std::size_t> level;
  std::map<std::string, std::uint32_t> key_of;
  auto lookup = [&](const EdgePath& p) -> std::uint32_t {
    auto it = key_of.find(oracle.canonical_key(p));
    return it == key_of.end() ? kNone : it->second;
  };
  auto intern = [&](const EdgePath& p, std::size_t lv) -> std::uint32_t {
    std::string k = oracle.canonical_key(p);
    auto it = key_of.find(k);
    if (it != key_of.end()) return it->second;
    if (rep.size() >= budgets.vertices)
      throw BudgetError("development exceeded " + std::to_string(budgets.vertices) + " vertices");
    std::uint32_t id = static_cast<std::uint32_t>(rep.size());
    key_of.emplace(std::move(k), id);
    rep.push_back(p);
    level.push_back(lv);
    return id;
  };

  intern(EdgePath{base, {}}, 0);
  for (std::size_t head = 0; head < rep.size(); ++head) {
    if (level[head] >= radius) continue;
    EdgePath p = rep[head];
    VertexId v = p.end(x);
    for (std::uint32_t dart : x.darts_at(v)) {
      EdgePath q = p;
      q.steps.push_back(dart);
      intern(q, level[head] + 1);
    }
  }

  // Corner completion: whenever three corners of a square lift are present,
  // develop the fourth. The fixpoint is the convex hull of the ball.
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < rep.size(); ++i) {
      VertexId v = rep[i].end(x);
      for (SquareId s = 0; s < x.ns(); ++s) {
        const Square& sq = x.squares[s];
        for (int r = 0; r < 4; ++r) {
          if (x.tail(sq.side[r]) != v) continue;
          std::uint32_t out = sq.side[r];
          std::uint32_t in = sq.side[(r + 3) % 4];
          EdgePath pa = rep[i];
          pa.steps.push_back(out);
          EdgePath pb = rep[i];
          pb.steps.push_back(dir::rev(in));
          if (lookup(pa) == kNone || lookup(pb) == kNone) continue;
          EdgePath diag = pa;
          diag.steps.push_back(sq.side[(r + 1) % 4]);
          if (lookup(diag) != kNone) continue;
          intern(diag, level[i] + 2);
          grew = true;
        }
      }
    }
  }

  ComplexBuilder b;
  for (std::size_t i = 0; i < rep.size(); ++i)
    b.add_vertex(x.vertex_name[rep[i].end(x)] + "@" + std::to_string(i));

  DevelopedBall d;
  std::vector<std::uint32_t> eid_of(rep.size() * x.ne(), kNone);
  for (std::uint32_t i = 0; i < rep.size(); ++i) {
    VertexId v = rep[i].end(x);
    for (std::uint32_t dart : x.darts_at(v)) {
      if (!dir::forward(dart)) continue;
      EdgePath q = rep[i];
      q.steps.push_back(dart);
      std::uint32_t j = lookup(q);
      if (j == kNone) continue;
      EdgeId e = dir::edge(dart);
      eid_of[std::size_t{i} * x.ne() + e] =
          b.add_edge(x.edge_name[e] + "@" + std::to_string(i), i, j);
      d.to_base.e_img.push_back(dir::fwd(e));
    }
  }
  for (std::uint32_t i = 0; i < rep.size(); ++i) {
    for (SquareId s = 0; s < x.ns(); ++s) {
      const Square& sq = x.squares[s];
      if (x.tail(sq.side[0]) != rep[i].end(x)) continue;
      std::array<std::uint32_t, 4> sides;
      std::uint32_t cur = i;
      bool whole = true;
      for (int p = 0; p < 4 && whole; ++p) {
        std::uint32_t dart = sq.side[p];
        EdgePath q = rep[cur];
        q.steps.push_back(dart);
        std::uint32_t nxt = lookup(q);
        if (nxt == kNone) {
          whole = false;
          break;
        }
        std::uint32_t tail_lift = dir::forward(dart) ? cur : nxt;
        std::uint32_t id = eid_of[std::size_t{tail_lift} * x.ne() + dir::edge(dart)];
        sides[p] = dir::make(id, dir::forward(dart));
        cur = nxt;
      }
      if (!whole) continue;
      if (cur != i)
        throw PropertyViolation("development of square " + x.square_name[s] +
                                " fails to close up at vertex " + std::to_string(i));
      b.add_square(x.square_name[s] + "@" + std::to_string(i), sides);
    }
  }

  d.ball = std::make_shared<SquareComplex>(b.build());
  d.to_base.domain = d.ball.get();
  d.to_base.codomain = &x;
  d.to_base.v_img.reserve(rep.size());
  for (const EdgePath& p : rep) d.to_base.v_img.push_back(p.end(x));
  d.to_base.validate();
  d.center = 0;
  d.radius = radius;
  d.dist = dists_from(*d.ball, d.center);

  d.walls = analyze(*d.ball);
  require_directly_special(*d.ball, d.walls, "developed ball");

  // Every wall of a simply connected patch splits it into exactly two sides.
  std::size_t nh = d.walls.hyperplanes.size();
  d.side.assign(nh, std::vector<char>(d.ball->nv(), 0));
  for (HyperplaneId h = 0; h < nh; ++h) {
    std::vector<char>& col = d.side[h];
    std::vector<char> seen(d.ball->nv(), 0);
    int comps = 0;
    for (VertexId v0 = 0; v0 < d.ball->nv(); ++v0) {
      if (seen[v0]) continue;
      if (comps >= 2)
        throw PropertyViolation("wall " + std::to_string(h) +
                                " cuts the ball into more than two parts");
      std::vector<VertexId> queue{v0};
      seen[v0] = 1;
      col[v0] = static_cast<char>(comps);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::uint32_t dart : d.ball->darts_at(queue[head])) {
          if (d.walls.hyperplane_of_edge[dir::edge(dart)] == h) continue;
          VertexId w = d.ball->head(dart);
          if (seen[w]) continue;
          seen[w] = 1;
          col[w] = static_cast<char>(comps);
          queue.push_back(w);
        }
      }
      ++comps;
    }
    if (comps != 2)
      throw PropertyViolation("wall " + std::to_string(h) + " fails to separate the ball");
    if (col[d.center] == 1)
      for (auto& c : col) c = static_cast<char>(1 - c);
  }

  d.depth.resize(d.ball->nv());
  for (VertexId v = 0; v < d.ball->nv(); ++v) d.depth[v] = dinf(d, d.center, v);
  d.boundary.resize(d.ball->nv());
  for (VertexId v = 0; v < d.ball->nv(); ++v) d.boundary[v] = d.depth[v] == radius;

  // Interior vertices carry the full star and link of their image.
  for (VertexId v = 0; v < d.ball->nv(); ++v) {
    if (d.boundary[v]) continue;
    VertexId down = d.to_base.v_img[v];
    if (d.ball->darts_at(v).size() != x.darts_at(down).size() ||
        d.ball->square_corners_at(v).size() != x.square_corners_at(down).size())
      throw PropertyViolation("interior vertex " + d.ball->vertex_name[v] +
                              " has an incomplete link over " + x.vertex_name[down]);
  }
  return d;
}

std::vector<HyperplaneId> separating_walls(const DevelopedBall& d, VertexId u, VertexId v) {
  std::vector<HyperplaneId> out;
  for (HyperplaneId h = 0; h < d.side.size(); ++h)
    if (d.separates(h, u, v)) out.push_back(h);
  return out;
}

std::vector<HyperplaneId> disjoint_separators(const DevelopedBall& d, VertexId u, VertexId v) {
  return max_antichain(d.walls, separating_walls(d, u, v));
}

std::size_t dinf(const DevelopedBall& d, VertexId u, VertexId v) {
  return disjoint_separators(d, u, v).size();
}

Subcomplex hull_of_vertices(const DevelopedBall& d, const std::vector<VertexId>& vs) {
  if (vs.empty()) throw StructuralError("hull of an empty vertex set");
  std::size_t nh = d.side.size();
  // Walls with the whole input on one side constrain the hull to that side.
  std::vector<char> pinned(nh, 0), pin_side(nh, 0);
  std::size_t crossed = 0;
  for (HyperplaneId h = 0; h < nh; ++h) {
    char s0 = d.side[h][vs[0]];
    bool same = true;
    for (VertexId v : vs)
      if (d.side[h][v] != s0) {
        same = false;
        break;
      }
    pinned[h] = same;
    pin_side[h] = s0;
    if (!same) ++crossed;
  }
  std::vector<char> keep(d.ball->nv(), 1);
  for (VertexId v = 0; v < d.ball->nv(); ++v)
    for (HyperplaneId h = 0; h < nh && keep[v]; ++h)
      if (pinned[h] && d.side[h][v] != pin_side[h]) keep[v] = 0;
  Subcomplex hull = Subcomplex::induced(*d.ball, keep);

  std::size_t deepest = 0;
  for (VertexId v : vs) deepest = std::max(deepest, d.depth[v]);
  for (VertexId v = 0; v < d.ball->nv(); ++v)
    if (hull.has_vertex(v) && d.boundary[v])
      throw StructuralError("hull reaches the ball boundary; develop radius at least " +
                            std::to_string(deepest + crossed) + " (have " +
                            std::to_string(d.radius) + ")");
  if (!hull.connected()) throw PropertyViolation("hull is disconnected");
  if (!locally_convex(hull))
    throw PropertyViolation("hull is not convex: " + locally_convex_witness(hull));
  return hull;
}

Subcomplex hull_of_path(const DevelopedBall& d, const EdgePath& lifted) {
  lifted.validate(*d.ball);
  Subcomplex hull = hull_of_vertices(d, path_vertices(*d.ball, lifted));
  std::vector<char> path_wall(d.side.size(), 0);
  for (std::uint32_t dart : lifted.steps)
    path_wall[d.walls.hyperplane_of_edge[dir::edge(dart)]] = 1;
  for (HyperplaneId h = 0; h < d.side.size(); ++h) {
    bool in_hull = wall_crosses(hull, d.walls, h);
    if (in_hull != (path_wall[h] != 0))
      throw PropertyViolation("hull walls differ from the path's crossed walls at wall " +
                              std::to_string(h));
  }
  return hull;
}

VertexId gate(const DevelopedBall& d, const Subcomplex& y, VertexId v) {
  require_convex_region(d, y, "gate target");
  std::vector<std::size_t> dv = dists_from(*d.ball, v);
  VertexId best = kNone;
  std::size_t best_d = kFar;
  bool tie = false;
  for (VertexId u = 0; u < d.ball->nv(); ++u) {
    if (!y.has_vertex(u) || dv[u] == kFar) continue;
    if (dv[u] < best_d) {
      best = u;
      best_d = dv[u];
      tie = false;
    } else if (dv[u] == best_d) {
      tie = true;
    }
  }
  if (best == kNone) throw StructuralError("gate target is unreachable");
  if (tie)
    throw PropertyViolation("two vertices of the gate target are equally close to " +
                            d.ball->vertex_name[v]);
  return best;
}

BridgeReport bridge_check(const DevelopedBall& d, const Subcomplex& y1, const Subcomplex& y2) {
  require_convex_region(d, y1, "bridge input 1");
  require_convex_region(d, y2, "bridge input 2");

  auto project = [&](const Subcomplex& target, const Subcomplex& source) {
    std::vector<char> img(d.ball->nv(), 0);
    for (VertexId u : source.vertices()) img[gate(d, target, u)] = 1;
    return Subcomplex::induced(*d.ball, img);
  };
  BridgeReport rep;
  rep.proj1 = project(y1, y2);
  rep.proj2 = project(y2, y1);
  require_convex_region(d, rep.proj1, "projection to input 1");
  require_convex_region(d, rep.proj2, "projection to input 2");

  // A wall crosses a projection exactly when it crosses both inputs.
  for (HyperplaneId h = 0; h < d.side.size(); ++h) {
    bool both = wall_crosses(y1, d.walls, h) && wall_crosses(y2, d.walls, h);
    if (wall_crosses(rep.proj1, d.walls, h) != both)
      throw PropertyViolation("wall " + std::to_string(h) +
                              " breaks the projection law on input 1");
    if (wall_crosses(rep.proj2, d.walls, h) != both)
      throw PropertyViolation("wall " + std::to_string(h) +
                              " breaks the projection law on input 2");
  }

  // The projections pair off along geodesics crossing one fixed wall family.
  std::vector<char> hit(d.ball->nv(), 0);
  bool first = true;
  for (VertexId a : rep.proj1.vertices()) {
    VertexId pa = gate(d, y2, a);
    if (!rep.proj2.has_vertex(pa))
      throw PropertyViolation("gate of " + d.ball->vertex_name[a] +
                              " lands outside the opposite projection");
    if (gate(d, y1, pa) != a)
      throw PropertyViolation("gates fail to invert each other at " + d.ball->vertex_name[a]);
    if (hit[pa])
      throw PropertyViolation("two projection vertices share the gate " +
                              d.ball->vertex_name[pa]);
    hit[pa] = 1;
    rep.pairing.emplace_back(a, pa);
    std::vector<HyperplaneId> sep = separating_walls(d, a, pa);
    if (first) {
      rep.separators = sep;
      rep.distance = sep.size();
      first = false;
    } else if (sep != rep.separators) {
      throw PropertyViolation("the geodesics from " + d.ball->vertex_name[a] +
                              " cross a different wall family");
    }
  }
  if (rep.proj1.vertex_count() != rep.proj2.vertex_count())
    throw PropertyViolation("projections have different sizes");

  // The hull between the projections stacks parallel copies: every vertex
  // sits on a geodesic and every level has the size of the projections.
  std::vector<VertexId> ends = rep.proj1.vertices();
  for (VertexId v : rep.proj2.vertices()) ends.push_back(v);
  rep.bridge = hull_of_vertices(d, ends);
  std::vector<std::size_t> lv(rep.distance + 1, 0);
  for (VertexId v : rep.bridge.vertices()) {
    std::size_t d1 = kFar, d2 = kFar;
    std::vector<std::size_t> dv = dists_from(*d.ball, v);
    for (VertexId a : rep.proj1.vertices()) d1 = std::min(d1, dv[a]);
    for (VertexId a : rep.proj2.vertices()) d2 = std::min(d2, dv[a]);
    if (d1 + d2 != rep.distance)
      throw PropertyViolation("bridge vertex " + d.ball->vertex_name[v] +
                              " lies off the geodesics between the projections");
    ++lv[d1];
  }
  for (std::size_t k = 0; k <= rep.distance; ++k)
    if (lv[k] != rep.proj1.vertex_count())
      throw PropertyViolation("bridge level " + std::to_string(k) +
                              " is not a parallel copy of the projection");
  return rep;
}

DinfFrontier dinf_frontier(const DevelopedBall& d, VertexId from, std::size_t level) {
  if (from >= d.ball->nv()) throw StructuralError("frontier basepoint out of range");
  DinfFrontier out;
  out.depth.resize(d.ball->nv());
  for (VertexId v = 0; v < d.ball->nv(); ++v) out.depth[v] = dinf(d, from, v);

  std::vector<char> in_w(d.ball->nv(), 0);
  for (VertexId v = 0; v < d.ball->nv(); ++v) in_w[v] = out.depth[v] <= level + 1;
  out.w = Subcomplex::induced(*d.ball, in_w);
  for (VertexId v = 0; v < d.ball->nv(); ++v)
    if (in_w[v] && d.boundary[v])
      throw StructuralError("the level-" + std::to_string(level + 1) +
                            " ball reaches the development boundary; develop radius at least " +
                            std::to_string(d.depth[from] + level + 2));
  if (!out.w.connected() || !locally_convex(out.w))
    throw PropertyViolation("the sup-metric ball is not convex");

  std::vector<char> seen_wall(d.side.size(), 0);
  for (EdgeId e = 0; e < d.ball->ne(); ++e) {
    VertexId a = d.ball->edge_end[e][0], bb = d.ball->edge_end[e][1];
    if (in_w[a] == in_w[bb]) continue;
    HyperplaneId h = d.walls.hyperplane_of_edge[e];
    if (seen_wall[h]) continue;
    seen_wall[h] = 1;
    out.frontier.push_back(h);
  }

  for (HyperplaneId h : out.frontier) {
    Subcomplex car = carrier(*d.ball, d.walls, h);
    std::vector<HyperplaneId> cand;
    for (HyperplaneId k = 0; k < d.side.size(); ++k) {
      if (k == h) continue;
      char s = d.side[k][from];
      bool separates_carrier = true;
      for (VertexId u : car.vertices())
        if (d.side[k][u] == s) {
          separates_carrier = false;
          break;
        }
      if (separates_carrier) cand.push_back(k);
    }
    std::vector<HyperplaneId> family = max_antichain(d.walls, cand);
    if (family.size() < level + 1)
      throw StructuralError("found only " + std::to_string(family.size()) +
                            " disjoint separators for frontier wall " + std::to_string(h) +
                            "; the development radius may be insufficient");
    family.resize(level + 1);
    out.certificate.push_back(std::move(family));
  }
  return out;
}

}  // namespace cubical
