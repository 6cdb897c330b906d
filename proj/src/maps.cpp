#include "cubical/maps.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace cubical {

EdgePath CombinatorialMap::apply_path(const EdgePath& p) const {
  EdgePath q;
  q.start = v_img[p.start];
  q.steps.reserve(p.steps.size());
  for (std::uint32_t c : p.steps) q.steps.push_back(apply_dir(c));
  return q;
}

namespace {

std::array<std::uint32_t, 4> image_cycle(const CombinatorialMap& m, const Square& s) {
  std::array<std::uint32_t, 4> img;
  for (int k = 0; k < 4; ++k) img[k] = m.apply_dir(s.side[k]);
  return img;
}

bool cycle_matches(const std::array<std::uint32_t, 4>& a, const std::array<std::uint32_t, 4>& b) {
  for (int r = 0; r < 4; ++r) {
    bool same = true, mirror = true;
    for (int k = 0; k < 4; ++k) {
      if (a[k] != b[(k + r) % 4]) same = false;
      // Reversed traversal of b, rotated.
      if (a[k] != dir::rev(b[(r + 4 - k) % 4])) mirror = false;
    }
    if (same || mirror) return true;
  }
  return false;
}

}  // namespace

void CombinatorialMap::validate() {
  const SquareComplex& d = *domain;
  const SquareComplex& c = *codomain;
  if (v_img.size() != d.nv() || e_img.size() != d.ne())
    throw StructuralError("map tables do not match the domain");
  for (VertexId v = 0; v < d.nv(); ++v)
    if (v_img[v] >= c.nv()) throw StructuralError("vertex image out of range");
  for (EdgeId e = 0; e < d.ne(); ++e) {
    if ((e_img[e] >> 1) >= c.ne()) throw StructuralError("edge image out of range");
    if (c.tail(e_img[e]) != v_img[d.edge_end[e][0]] || c.head(e_img[e]) != v_img[d.edge_end[e][1]])
      throw StructuralError("edge " + d.edge_name[e] + " maps incompatibly with its endpoints");
  }
  s_img.assign(d.ns(), kNone);
  for (SquareId s = 0; s < d.ns(); ++s) {
    auto img = image_cycle(*this, d.squares[s]);
    for (SquareId t = 0; t < c.ns(); ++t)
      if (cycle_matches(img, c.squares[t].side)) {
        s_img[s] = t;
        break;
      }
    if (s_img[s] == kNone)
      throw StructuralError("square " + d.square_name[s] +
                            " does not map onto a codomain square");
  }
}

CombinatorialMap identity_map(const SquareComplex& x) {
  CombinatorialMap m;
  m.domain = m.codomain = &x;
  m.v_img.resize(x.nv());
  for (VertexId v = 0; v < x.nv(); ++v) m.v_img[v] = v;
  m.e_img.resize(x.ne());
  for (EdgeId e = 0; e < x.ne(); ++e) m.e_img[e] = dir::fwd(e);
  m.validate();
  return m;
}

CombinatorialMap compose(const CombinatorialMap& f, const CombinatorialMap& g) {
  if (f.codomain != g.domain) throw StructuralError("composition domains do not line up");
  CombinatorialMap m;
  m.domain = f.domain;
  m.codomain = g.codomain;
  m.v_img.resize(f.v_img.size());
  for (std::size_t v = 0; v < f.v_img.size(); ++v) m.v_img[v] = g.v_img[f.v_img[v]];
  m.e_img.resize(f.e_img.size());
  for (std::size_t e = 0; e < f.e_img.size(); ++e) m.e_img[e] = g.apply_dir(f.e_img[e]);
  m.validate();
  return m;
}

CombinatorialMap inclusion_map(const SquareComplex& sub, const SquareComplex& parent,
                               const std::vector<VertexId>& v_new_of_old,
                               const std::vector<EdgeId>& e_new_of_old) {
  CombinatorialMap m;
  m.domain = &sub;
  m.codomain = &parent;
  m.v_img.assign(sub.nv(), kNone);
  m.e_img.assign(sub.ne(), kNone);
  for (VertexId old = 0; old < v_new_of_old.size(); ++old)
    if (v_new_of_old[old] != kNone) m.v_img[v_new_of_old[old]] = old;
  for (EdgeId old = 0; old < e_new_of_old.size(); ++old)
    if (e_new_of_old[old] != kNone) m.e_img[e_new_of_old[old]] = dir::fwd(old);
  m.validate();
  return m;
}

MapCheck check_map(const CombinatorialMap& m) {
  MapCheck out;
  CombinatorialMap probe = m;
  try {
    probe.validate();
    out.combinatorial = true;
  } catch (const StructuralError& err) {
    out.witnesses.push_back(err.what());
    return out;
  }
  const SquareComplex& d = *m.domain;
  const SquareComplex& c = *m.codomain;
  out.local_isometry = true;
  for (VertexId v = 0; v < d.nv(); ++v) {
    const auto& darts = d.darts_at(v);
    for (std::size_t i = 0; i < darts.size(); ++i)
      for (std::size_t j = i + 1; j < darts.size(); ++j) {
        std::uint32_t gi = m.apply_dir(darts[i]), gj = m.apply_dir(darts[j]);
        if (gi == gj) {
          out.local_isometry = false;
          out.witnesses.push_back("darts " + d.dir_name(darts[i]) + ", " + d.dir_name(darts[j]) +
                                  " at " + d.vertex_name[v] + " map to the same dart " +
                                  c.dir_name(gi));
        } else if (c.is_corner_pair(m.v_img[v], gi, gj) &&
                   !d.is_corner_pair(v, darts[i], darts[j])) {
          out.local_isometry = false;
          out.witnesses.push_back("link not full at " + d.vertex_name[v] + ": images of " +
                                  d.dir_name(darts[i]) + ", " + d.dir_name(darts[j]) +
                                  " span a corner with no corner upstairs");
        }
      }
  }
  return out;
}

void require_local_isometry(const CombinatorialMap& m, const std::string& role) {
  MapCheck ck = check_map(m);
  if (ck.combinatorial && ck.local_isometry) return;
  std::string msg = role + " must be a local isometry; violations:";
  for (const std::string& w : ck.witnesses) msg += "\n  " + w;
  throw PropertyViolation(msg);
}

Subcomplex carrier(const SquareComplex& x, const StructureReport& r, HyperplaneId h) {
  if (h >= r.hyperplanes.size()) throw StructuralError("no such hyperplane");
  std::vector<EdgeId> es = r.hyperplanes[h].edges;
  std::vector<SquareId> ss;
  for (SquareId s = 0; s < x.ns(); ++s) {
    HyperplaneId h02 = r.hyperplane_of_edge[x.squares[s].side[0] >> 1];
    HyperplaneId h13 = r.hyperplane_of_edge[x.squares[s].side[1] >> 1];
    if (h02 == h || h13 == h) ss.push_back(s);
  }
  return Subcomplex::span(x, {}, es, ss);
}

HyperplaneRelation complex_hyperplane_relation(const CombinatorialMap& phi,
                                               const StructureReport& r_domain,
                                               const StructureReport& r_codomain,
                                               HyperplaneId h) {
  (void)r_domain;
  HyperplaneRelation rel;
  const SquareComplex& y = *phi.domain;
  const SquareComplex& x = *phi.codomain;
  for (EdgeId e = 0; e < y.ne(); ++e)
    if (r_codomain.hyperplane_of_edge[phi.e_img[e] >> 1] == h) rel.intersects = true;
  std::set<std::pair<VertexId, EdgeId>> seen;
  for (VertexId v = 0; v < y.nv(); ++v) {
    for (std::uint32_t g : x.darts_at(phi.v_img[v])) {
      if (r_codomain.hyperplane_of_edge[g >> 1] != h) continue;
      bool hit = false;
      for (std::uint32_t f : y.darts_at(v))
        if (phi.apply_dir(f) == g) hit = true;
      if (!hit && seen.insert({v, g >> 1}).second) rel.osculations.push_back({v, g >> 1});
    }
  }
  rel.inter_osculates = rel.intersects && !rel.osculations.empty();
  return rel;
}

bool locally_convex(const Subcomplex& y) { return locally_convex_witness(y).empty(); }

std::string locally_convex_witness(const Subcomplex& y) {
  const SquareComplex& x = *y.parent;
  if (!y.closed_under_incidence()) return "not closed under incidence";
  for (const Corner& c : x.all_corners())
    if (y.e_in[c.dart_a >> 1] && y.e_in[c.dart_b >> 1] && !y.s_in[c.square])
      return "corner {" + x.dir_name(c.dart_a) + ", " + x.dir_name(c.dart_b) + "} at " +
             x.vertex_name[c.at] + " lies inside but its square " + x.square_name[c.square] +
             " does not";
  return {};
}

namespace {

// Generator loops of one component of a vertex+edge graph: spanning tree
// plus one loop per chord, based at the component root.
std::vector<EdgePath> component_chord_loops(const SquareComplex& x, const Subcomplex& sub,
                                            VertexId root, std::vector<char>& visited) {
  std::vector<std::uint32_t> parent_step(x.nv(), kNone);
  std::vector<char> in_comp(x.nv(), 0);
  std::queue<VertexId> q;
  q.push(root);
  visited[root] = 1;
  in_comp[root] = 1;
  std::vector<char> in_tree(x.ne(), 0);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::uint32_t d : x.darts_at(v)) {
      if (!sub.e_in[d >> 1]) continue;
      VertexId w = x.head(d);
      if (!in_comp[w]) {
        visited[w] = 1;
        in_comp[w] = 1;
        parent_step[w] = d;
        in_tree[d >> 1] = 1;
        q.push(w);
      }
    }
  }
  auto to_root_path = [&](VertexId v) {
    EdgePath p;
    std::vector<std::uint32_t> back;
    while (v != root) {
      back.push_back(parent_step[v]);
      v = x.tail(parent_step[v]);
    }
    p.start = root;
    for (auto it = back.rbegin(); it != back.rend(); ++it) p.steps.push_back(*it);
    return p;
  };
  std::vector<EdgePath> loops;
  for (EdgeId e = 0; e < x.ne(); ++e) {
    if (!sub.e_in[e] || in_tree[e]) continue;
    if (!in_comp[x.edge_end[e][0]]) continue;  // different component
    EdgePath u = to_root_path(x.edge_end[e][0]);
    EdgePath w = to_root_path(x.edge_end[e][1]);
    EdgePath loop = u;
    loop.steps.push_back(dir::fwd(e));
    EdgePath wrev = w.reversed(x);
    loop.steps.insert(loop.steps.end(), wrev.steps.begin(), wrev.steps.end());
    loops.push_back(free_reduce(loop));
  }
  return loops;
}

}  // namespace

WallProjection wall_projection(const SquareComplex& x, const StructureReport& r,
                               const Subcomplex& y1, const Subcomplex& y2,
                               const WordOracle* oracle) {
  std::vector<char> class_meets_y1(r.hyperplanes.size(), 0);
  for (EdgeId e = 0; e < x.ne(); ++e)
    if (y1.e_in[e]) class_meets_y1[r.hyperplane_of_edge[e]] = 1;

  WallProjection out;
  out.wproj = Subcomplex::empty(x);
  out.wproj.v_in = y2.v_in;
  for (EdgeId e = 0; e < x.ne(); ++e)
    out.wproj.e_in[e] = y2.e_in[e] && class_meets_y1[r.hyperplane_of_edge[e]];
  for (SquareId s = 0; s < x.ns(); ++s) {
    bool all = y2.s_in[s] != 0;
    for (auto side : x.squares[s].side)
      all = all && class_meets_y1[r.hyperplane_of_edge[side >> 1]];
    out.wproj.s_in[s] = all ? 1 : 0;
  }

  if (oracle) {
    bool trivial = true;
    std::vector<char> visited(x.nv(), 0);
    for (VertexId v = 0; v < x.nv() && trivial; ++v) {
      if (!out.wproj.v_in[v] || visited[v]) continue;
      for (EdgePath& loop : component_chord_loops(x, out.wproj, v, visited))
        if (!oracle->trivial(loop)) {
          trivial = false;
          out.essential_loop = loop;
          break;
        }
    }
    out.trivial = trivial;
  }
  return out;
}

SquareComplex subdivide(const SquareComplex& x) {
  ComplexBuilder b;
  std::vector<VertexId> orig(x.nv()), mid(x.ne()), center(x.ns());
  for (VertexId v = 0; v < x.nv(); ++v) orig[v] = b.add_vertex(x.vertex_name[v]);
  for (EdgeId e = 0; e < x.ne(); ++e) mid[e] = b.add_vertex(x.edge_name[e] + ":m");
  for (SquareId s = 0; s < x.ns(); ++s) center[s] = b.add_vertex(x.square_name[s] + ":c");

  std::vector<std::array<EdgeId, 2>> halves(x.ne());
  for (EdgeId e = 0; e < x.ne(); ++e) {
    halves[e][0] = b.add_edge(x.edge_name[e] + ":0", orig[x.edge_end[e][0]], mid[e]);
    halves[e][1] = b.add_edge(x.edge_name[e] + ":1", mid[e], orig[x.edge_end[e][1]]);
  }
  // Directed half of a traversal: which = 0 for the first half walked.
  auto half = [&](std::uint32_t c, int which) {
    EdgeId e = c >> 1;
    if (dir::forward(c)) return dir::fwd(halves[e][which]);
    return dir::make(halves[e][1 - which], false);
  };
  for (SquareId s = 0; s < x.ns(); ++s) {
    std::array<EdgeId, 4> spoke;
    for (int k = 0; k < 4; ++k)
      spoke[k] = b.add_edge(x.square_name[s] + ":s" + std::to_string(k),
                            mid[x.squares[s].side[k] >> 1], center[s]);
    for (int k = 0; k < 4; ++k) {
      int prev = (k + 3) % 4;
      b.add_square(x.square_name[s] + ":" + std::to_string(k),
                   {half(x.squares[s].side[k], 0), dir::fwd(spoke[k]),
                    dir::make(spoke[prev], false), half(x.squares[s].side[prev], 1)});
    }
  }
  return b.build();
}

}  // namespace cubical
