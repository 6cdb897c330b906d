#include "cubical/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

namespace cubical {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::kIntersect: return "intersect";
    case EventKind::kOsculate: return "osculate";
    case EventKind::kSelfIntersect: return "self-intersect";
    case EventKind::kSelfOsculate: return "self-osculate";
    case EventKind::kLoopSelfOsculate: return "loop-self-osculate";
  }
  return "?";
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Elementary parallel transport inside a square: opposite sides cross the
// same hyperplane, and the crossing direction of side i matches the
// reverse of side i+2.
void for_each_transport(const SquareComplex& x,
                        const std::function<void(std::uint32_t, std::uint32_t, SquareId)>& f) {
  // All four rotations: the relation must be closed under reversing both
  // darts, and (side[i], rev(side[i+2])) alone is not.
  for (std::uint32_t s = 0; s < x.ns(); ++s)
    for (int i = 0; i < 4; ++i) {
      std::uint32_t a = x.squares[s].side[i];
      std::uint32_t b = dir::rev(x.squares[s].side[(i + 2) % 4]);
      f(a, b, s);
    }
}

FlipWitness flip_chain(const SquareComplex& x, std::uint32_t from, std::uint32_t to) {
  // BFS in the directed-edge parallelism graph, remembering the square used.
  std::vector<std::pair<std::uint32_t, SquareId>> via(2 * x.ne(), {kNone, kNone});
  std::vector<char> seen(2 * x.ne(), 0);
  std::queue<std::uint32_t> q;
  q.push(from);
  seen[from] = 1;
  std::vector<std::vector<std::pair<std::uint32_t, SquareId>>> adj(2 * x.ne());
  for_each_transport(x, [&](std::uint32_t a, std::uint32_t b, SquareId s) {
    adj[a].push_back({b, s});
    adj[b].push_back({a, s});
  });
  while (!q.empty()) {
    std::uint32_t d = q.front();
    q.pop();
    if (d == to) break;
    for (auto [n, s] : adj[d])
      if (!seen[n]) {
        seen[n] = 1;
        via[n] = {d, s};
        q.push(n);
      }
  }
  FlipWitness w;
  if (!seen[to]) return w;
  std::uint32_t cur = to;
  while (cur != from) {
    w.dirs.push_back(cur);
    w.via.push_back(via[cur].second);
    cur = via[cur].first;
  }
  w.dirs.push_back(from);
  std::reverse(w.dirs.begin(), w.dirs.end());
  std::reverse(w.via.begin(), w.via.end());
  return w;
}

void finish_report(const SquareComplex& x, StructureReport& r) {
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (x.is_loop(e)) r.loop_edges.push_back(e);

  bool all_two_sided = true;
  for (const Hyperplane& h : r.hyperplanes)
    if (!h.two_sided) {
      all_two_sided = false;
      r.failures.push_back("one-sided hyperplane H" + std::to_string(h.id) + " (edge " +
                           x.edge_name[h.edges[0]] + ")");
    }
  for (const LinkViolation& lv : r.link_violations) {
    std::string what = lv.loop ? "link loop on dart " + x.dir_name(lv.dart1)
                               : "doubled corner {" + x.dir_name(lv.dart1) + ", " +
                                     x.dir_name(lv.dart2) + "} in squares " +
                                     x.square_name[lv.square1] + ", " + x.square_name[lv.square2];
    r.failures.push_back("non-simple link at " + x.vertex_name[lv.at] + ": " + what);
  }
  bool self_clean = true;
  for (const OsculationEvent& ev : r.events) {
    if (ev.kind == EventKind::kIntersect || ev.kind == EventKind::kOsculate) continue;
    self_clean = false;
    std::string w = ev.kind == EventKind::kLoopSelfOsculate
                        ? "(" + x.vertex_name[ev.at] + "; " + x.edge_name[ev.dart1 >> 1] + ")"
                        : "(" + x.vertex_name[ev.at] + "; " + x.dir_name(ev.dart1) + ", " +
                              x.dir_name(ev.dart2) + ")";
    r.failures.push_back(std::string(to_string(ev.kind)) + " of H" + std::to_string(ev.h1) +
                         " at " + w);
  }
  auto inter = r.inter_osculating_pairs();
  for (auto [a, b] : inter)
    r.failures.push_back("inter-osculation of H" + std::to_string(a) + " and H" +
                         std::to_string(b));
  for (EdgeId e : r.loop_edges)
    r.failures.push_back("edge loop " + x.edge_name[e] + " at " + x.vertex_name[x.edge_end[e][0]]);

  r.directly_special = r.npc && all_two_sided && self_clean && inter.empty() &&
                       r.loop_edges.empty();
}

}  // namespace

bool StructureReport::pair_intersects(HyperplaneId a, HyperplaneId b) const {
  if (a > b) std::swap(a, b);
  for (const OsculationEvent& ev : events)
    if (ev.h1 == a && ev.h2 == b &&
        (ev.kind == EventKind::kIntersect || ev.kind == EventKind::kSelfIntersect))
      return true;
  return false;
}

bool StructureReport::pair_osculates(HyperplaneId a, HyperplaneId b) const {
  if (a > b) std::swap(a, b);
  for (const OsculationEvent& ev : events)
    if (ev.h1 == a && ev.h2 == b &&
        (ev.kind == EventKind::kOsculate || ev.kind == EventKind::kSelfOsculate ||
         ev.kind == EventKind::kLoopSelfOsculate))
      return true;
  return false;
}

std::vector<std::pair<HyperplaneId, HyperplaneId>> StructureReport::inter_osculating_pairs()
    const {
  std::map<std::pair<HyperplaneId, HyperplaneId>, int> bits;
  for (const OsculationEvent& ev : events) {
    if (ev.h1 == ev.h2) continue;
    int bit = ev.kind == EventKind::kIntersect ? 1 : 2;
    bits[{ev.h1, ev.h2}] |= bit;
  }
  std::vector<std::pair<HyperplaneId, HyperplaneId>> out;
  for (auto& [pr, b] : bits)
    if (b == 3) out.push_back(pr);
  return out;
}

StructureReport analyze(const SquareComplex& x) {
  StructureReport r;

  // Hyperplanes: transitive closure of "opposite edges of some square".
  UnionFind edge_uf(x.ne());
  UnionFind dir_uf(2 * x.ne());
  for_each_transport(x, [&](std::uint32_t a, std::uint32_t b, SquareId) {
    edge_uf.unite(a >> 1, b >> 1);
    dir_uf.unite(a, b);
  });
  std::map<std::uint32_t, std::vector<EdgeId>> classes;
  for (std::uint32_t e = 0; e < x.ne(); ++e) classes[edge_uf.find(e)].push_back(e);
  r.hyperplane_of_edge.assign(x.ne(), kNone);
  r.side_of_dir.assign(2 * x.ne(), 0);
  for (auto& [root, edges] : classes) {
    Hyperplane h;
    h.id = static_cast<HyperplaneId>(r.hyperplanes.size());
    h.edges = edges;  // sorted: map key = min edge, members pushed in order
    h.two_sided = true;
    for (EdgeId e : edges)
      if (dir_uf.find(2 * e) == dir_uf.find(2 * e + 1)) h.two_sided = false;
    if (h.two_sided) {
      std::uint32_t plus = dir_uf.find(2 * edges[0]);
      for (EdgeId e : edges) {
        r.side_of_dir[2 * e] = dir_uf.find(2 * e) == plus ? 1 : -1;
        r.side_of_dir[2 * e + 1] = static_cast<std::int8_t>(-r.side_of_dir[2 * e]);
      }
    } else {
      for (EdgeId e : edges)
        if (dir_uf.find(2 * e) == dir_uf.find(2 * e + 1)) {
          h.flip = flip_chain(x, 2 * e, 2 * e + 1);
          break;
        }
    }
    for (EdgeId e : edges) r.hyperplane_of_edge[e] = h.id;
    r.hyperplanes.push_back(std::move(h));
  }

  // Link simplicity at every vertex.
  r.link_simple.assign(x.nv(), 1);
  for (std::uint32_t v = 0; v < x.nv(); ++v) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<SquareId, std::uint8_t>> seen;
    for (const Corner& c : x.corners_at(v)) {
      if (c.dart_a == c.dart_b) {
        r.link_simple[v] = 0;
        r.link_violations.push_back({v, true, c.dart_a, c.dart_b, c.square, kNone});
        continue;
      }
      auto key = std::make_pair(c.dart_a, c.dart_b);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, std::make_pair(c.square, c.pos));
      } else if (it->second.first != c.square || it->second.second != c.pos) {
        r.link_simple[v] = 0;
        r.link_violations.push_back({v, false, c.dart_a, c.dart_b, it->second.first, c.square});
      }
    }
  }
  r.npc = r.link_violations.empty();

  // Exhaustive event classification over dart pairs, parallel over
  // vertices. Per-vertex buckets keep output order independent of the
  // thread count.
  std::vector<std::vector<OsculationEvent>> bucket(x.nv());
  const auto nvi = static_cast<std::int64_t>(x.nv());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t vi = 0; vi < nvi; ++vi) {
    auto v = static_cast<VertexId>(vi);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> corner_pairs;
    for (const Corner& c : x.corners_at(v)) corner_pairs.push_back({c.dart_a, c.dart_b});
    std::sort(corner_pairs.begin(), corner_pairs.end());
    const auto& darts = x.darts_at(v);
    for (std::size_t i = 0; i < darts.size(); ++i)
      for (std::size_t j = i + 1; j < darts.size(); ++j) {
        OsculationEvent ev;
        ev.at = v;
        ev.dart1 = darts[i];
        ev.dart2 = darts[j];
        ev.h1 = r.hyperplane_of_edge[ev.dart1 >> 1];
        ev.h2 = r.hyperplane_of_edge[ev.dart2 >> 1];
        if (ev.h1 > ev.h2) std::swap(ev.h1, ev.h2);
        bool corner = std::binary_search(corner_pairs.begin(), corner_pairs.end(),
                                         std::make_pair(ev.dart1, ev.dart2));
        bool same_edge = (ev.dart1 >> 1) == (ev.dart2 >> 1);
        if (corner)
          ev.kind = ev.h1 == ev.h2 ? EventKind::kSelfIntersect : EventKind::kIntersect;
        else if (same_edge)
          ev.kind = EventKind::kLoopSelfOsculate;
        else if (ev.h1 == ev.h2)
          ev.kind = EventKind::kSelfOsculate;
        else
          ev.kind = EventKind::kOsculate;
        bucket[v].push_back(ev);
      }
  }
  for (auto& b : bucket) r.events.insert(r.events.end(), b.begin(), b.end());

  finish_report(x, r);
  return r;
}

void require_directly_special(const SquareComplex& x, const StructureReport& r,
                              const std::string& role) {
  (void)x;
  if (r.directly_special) return;
  std::string msg = role + " must be directly special; violations:";
  for (const std::string& f : r.failures) msg += "\n  " + f;
  throw PropertyViolation(msg);
}

bool same_verdicts(const StructureReport& a, const StructureReport& b) {
  if (a.hyperplanes.size() != b.hyperplanes.size()) return false;
  for (std::size_t i = 0; i < a.hyperplanes.size(); ++i) {
    if (a.hyperplanes[i].edges != b.hyperplanes[i].edges) return false;
    if (a.hyperplanes[i].two_sided != b.hyperplanes[i].two_sided) return false;
  }
  return a.hyperplane_of_edge == b.hyperplane_of_edge && a.side_of_dir == b.side_of_dir &&
         a.link_simple == b.link_simple && a.npc == b.npc && a.events == b.events &&
         a.loop_edges == b.loop_edges && a.directly_special == b.directly_special;
}

}  // namespace cubical
