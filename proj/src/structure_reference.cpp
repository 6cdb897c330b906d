#include <algorithm>
#include <queue>

#include "cubical/structure.hpp"

namespace cubical {

// Same verdicts as analyze(), computed by deliberately different means:
// min-label fixpoint iteration for parallelism classes, explicit BFS
// 2-coloring for sidedness, and full square scans for corner queries.
StructureReport analyze_reference(const SquareComplex& x) {
  StructureReport r;

  // Parallelism classes: propagate minimum labels until stable.
  std::vector<EdgeId> label(x.ne());
  for (std::uint32_t e = 0; e < x.ne(); ++e) label[e] = e;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Square& s : x.squares)
      for (int i = 0; i < 2; ++i) {
        EdgeId a = s.side[i] >> 1, b = s.side[i + 2] >> 1;
        EdgeId m = std::min(label[a], label[b]);
        if (label[a] != m || label[b] != m) {
          label[a] = label[b] = m;
          changed = true;
        }
      }
  }
  std::vector<EdgeId> roots;
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (label[e] == e) roots.push_back(e);
  r.hyperplane_of_edge.assign(x.ne(), kNone);
  for (std::uint32_t e = 0; e < x.ne(); ++e) {
    auto it = std::lower_bound(roots.begin(), roots.end(), label[e]);
    r.hyperplane_of_edge[e] = static_cast<HyperplaneId>(it - roots.begin());
  }

  // Directed-edge parallelism adjacency for the coloring.
  std::vector<std::vector<std::uint32_t>> adj(2 * x.ne());
  for (const Square& s : x.squares)
    for (int i = 0; i < 4; ++i) {
      std::uint32_t a = s.side[i], b = dir::rev(s.side[(i + 2) % 4]);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }

  r.side_of_dir.assign(2 * x.ne(), 0);
  for (std::uint32_t hid = 0; hid < roots.size(); ++hid) {
    Hyperplane h;
    h.id = hid;
    for (std::uint32_t e = 0; e < x.ne(); ++e)
      if (r.hyperplane_of_edge[e] == hid) h.edges.push_back(e);

    // Transport preserves crossing direction, so the member directions
    // split into at most two components. Two-sided: the component of the
    // least member's forward direction contains no direction twice (never
    // both 2f and 2f+1); it is then the + side and its reverses the - side.
    std::vector<char> comp(2 * x.ne(), 0);
    std::queue<std::uint32_t> q;
    q.push(2 * h.edges[0]);
    comp[2 * h.edges[0]] = 1;
    while (!q.empty()) {
      std::uint32_t d = q.front();
      q.pop();
      for (std::uint32_t n : adj[d])
        if (!comp[n]) {
          comp[n] = 1;
          q.push(n);
        }
    }
    h.two_sided = true;
    for (EdgeId e : h.edges)
      if (comp[2 * e] && comp[2 * e + 1]) h.two_sided = false;
    if (h.two_sided)
      for (EdgeId e : h.edges) {
        r.side_of_dir[2 * e] = comp[2 * e] ? 1 : -1;
        r.side_of_dir[2 * e + 1] = static_cast<std::int8_t>(-r.side_of_dir[2 * e]);
      }
    r.hyperplanes.push_back(std::move(h));
  }

  // Link simplicity by pairwise corner comparison, corners rebuilt from raw
  // square boundaries.
  struct RawCorner {
    VertexId at;
    std::uint32_t a, b;
    SquareId s;
    std::uint8_t pos;
  };
  std::vector<RawCorner> raw;
  for (std::uint32_t s = 0; s < x.ns(); ++s)
    for (std::uint8_t k = 0; k < 4; ++k) {
      std::uint32_t in = x.squares[s].side[k], out = x.squares[s].side[(k + 1) % 4];
      RawCorner c{x.head(in), dir::rev(in), out, s, k};
      if (c.a > c.b) std::swap(c.a, c.b);
      raw.push_back(c);
    }
  r.link_simple.assign(x.nv(), 1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].a == raw[i].b) {
      r.link_simple[raw[i].at] = 0;
      r.link_violations.push_back({raw[i].at, true, raw[i].a, raw[i].b, raw[i].s, kNone});
    }
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      if (raw[i].at == raw[j].at && raw[i].a == raw[j].a && raw[i].b == raw[j].b &&
          raw[i].a != raw[i].b) {
        r.link_simple[raw[i].at] = 0;
        r.link_violations.push_back({raw[i].at, false, raw[i].a, raw[i].b, raw[i].s, raw[j].s});
      }
  }
  r.npc = r.link_violations.empty();

  // Events by direct scan: a pair is a corner iff some square produces it.
  for (std::uint32_t v = 0; v < x.nv(); ++v) {
    std::vector<std::uint32_t> darts;
    for (std::uint32_t e = 0; e < x.ne(); ++e) {
      if (x.edge_end[e][0] == v) darts.push_back(2 * e);
      if (x.edge_end[e][1] == v) darts.push_back(2 * e + 1);
    }
    std::sort(darts.begin(), darts.end());
    for (std::size_t i = 0; i < darts.size(); ++i)
      for (std::size_t j = i + 1; j < darts.size(); ++j) {
        OsculationEvent ev;
        ev.at = v;
        ev.dart1 = darts[i];
        ev.dart2 = darts[j];
        ev.h1 = r.hyperplane_of_edge[ev.dart1 >> 1];
        ev.h2 = r.hyperplane_of_edge[ev.dart2 >> 1];
        if (ev.h1 > ev.h2) std::swap(ev.h1, ev.h2);
        bool corner = false;
        for (const RawCorner& c : raw)
          if (c.at == v && c.a == ev.dart1 && c.b == ev.dart2) corner = true;
        if (corner)
          ev.kind = ev.h1 == ev.h2 ? EventKind::kSelfIntersect : EventKind::kIntersect;
        else if ((ev.dart1 >> 1) == (ev.dart2 >> 1))
          ev.kind = EventKind::kLoopSelfOsculate;
        else if (ev.h1 == ev.h2)
          ev.kind = EventKind::kSelfOsculate;
        else
          ev.kind = EventKind::kOsculate;
        r.events.push_back(ev);
      }
  }

  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (x.edge_end[e][0] == x.edge_end[e][1]) r.loop_edges.push_back(e);
  bool all_two_sided = true;
  for (const Hyperplane& h : r.hyperplanes) all_two_sided &= h.two_sided;
  bool self_clean = true;
  for (const OsculationEvent& ev : r.events)
    self_clean &= ev.kind == EventKind::kIntersect || ev.kind == EventKind::kOsculate;
  r.directly_special = r.npc && all_two_sided && self_clean &&
                       r.inter_osculating_pairs().empty() && r.loop_edges.empty();
  return r;
}

}  // namespace cubical
