#include "cubical/hier.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace cubical {

namespace {

void gen_distinct(std::size_t n, std::size_t len, std::vector<std::uint32_t>& cur,
                  std::vector<char>& used, std::vector<std::vector<std::uint32_t>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    cur.push_back(i);
    gen_distinct(n, len, cur, used, out);
    cur.pop_back();
    used[i] = 0;
  }
}

}  // namespace

std::uint32_t HierSystem::seq_index(const std::vector<std::uint32_t>& s) const {
  for (std::uint32_t k = 0; k < seqs.size(); ++k)
    if (seqs[k] == s) return k;
  return kNone;
}

std::uint32_t HierSystem::move_of(std::size_t i, VertexId v, HyperplaneId h) const {
  return move_[(i * x->nv() + v) * nh_ + h];
}

HierSystem hier_system(const SquareComplex& x, const StructureReport& rx,
                       std::vector<Subcomplex> ys) {
  if (ys.empty()) throw StructuralError("hierarchy needs at least one family member");
  require_directly_special(x, rx, "hierarchy ambient complex");

  HierSystem sys;
  sys.x = &x;
  sys.rx = &rx;
  sys.ys = std::move(ys);
  sys.nh_ = rx.hyperplanes.size();

  for (std::size_t i = 0; i < sys.ys.size(); ++i) {
    const Subcomplex& y = sys.ys[i];
    if (y.parent != &x) throw StructuralError("family member " + std::to_string(i) +
                                              " is not a subcomplex of the ambient complex");
    if (y.vertex_count() == 0)
      throw StructuralError("family member " + std::to_string(i) + " is empty");
    if (!y.connected())
      throw StructuralError("family member " + std::to_string(i) + " is disconnected");
    if (!locally_convex(y))
      throw StructuralError("family member " + std::to_string(i) + " is not locally convex: " +
                            locally_convex_witness(y));

    std::vector<VertexId> vmap;
    std::vector<EdgeId> emap;
    auto yc = std::make_shared<SquareComplex>(y.materialize(&vmap, &emap));
    CombinatorialMap incl = inclusion_map(*yc, x, vmap, emap);
    incl.validate();
    StructureReport ry = analyze(*yc);
    for (HyperplaneId h = 0; h < sys.nh_; ++h) {
      if (complex_hyperplane_relation(incl, ry, rx, h).inter_osculates)
        throw PropertyViolation("family member " + std::to_string(i) +
                                " inter-osculates with wall " + std::to_string(h));
    }
    sys.y_complex.push_back(std::move(yc));
    sys.y_inclusion.push_back(std::move(incl));
    sys.y_vertex_of_x.push_back(std::move(vmap));
  }

  std::size_t n = sys.ys.size();
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::uint32_t> cur;
    std::vector<char> used(n, 0);
    gen_distinct(n, len, cur, used, sys.seqs);
  }
  sys.suffix_of.assign(sys.seqs.size(), kNone);
  for (std::uint32_t k = 0; k < sys.seqs.size(); ++k) {
    if (sys.seqs[k].size() == 1) continue;
    std::vector<std::uint32_t> tail(sys.seqs[k].begin() + 1, sys.seqs[k].end());
    sys.suffix_of[k] = sys.seq_index(tail);
  }

  // Dart table: at most one dart of member i at v dual to each wall, since a
  // second one would make the wall self-osculate in the ambient complex.
  sys.move_.assign(n * x.nv() * sys.nh_, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    for (VertexId v = 0; v < x.nv(); ++v) {
      if (!sys.ys[i].has_vertex(v)) continue;
      for (std::uint32_t d : x.darts_at(v)) {
        if (!sys.ys[i].has_edge(dir::edge(d))) continue;
        HyperplaneId h = rx.hyperplane_of_edge[dir::edge(d)];
        std::uint32_t& slot = sys.move_[(i * x.nv() + v) * sys.nh_ + h];
        if (slot != kNone)
          throw PropertyViolation("two darts of member " + std::to_string(i) + " at " +
                                  x.vertex_name[v] + " are dual to wall " + std::to_string(h));
        slot = d;
      }
    }
  }
  return sys;
}

HierState initial_state(const HierSystem& sys, VertexId base) {
  if (base >= sys.x->nv()) throw StructuralError("base vertex out of range");
  for (std::size_t i = 0; i < sys.ys.size(); ++i)
    if (!sys.ys[i].has_vertex(base))
      throw StructuralError("base " + sys.x->vertex_name[base] + " lies off family member " +
                            std::to_string(i));
  HierState st;
  st.walker = base;
  st.theta.assign(sys.nseq(), base);
  return st;
}

HierStep hier_transition(const HierSystem& sys, const HierState& st, std::uint32_t walker_dart) {
  const SquareComplex& x = *sys.x;
  if (st.theta.size() != sys.nseq()) throw StructuralError("hierarchy state has the wrong width");
  if (dir::edge(walker_dart) >= x.ne()) throw StructuralError("walker dart out of range");
  if (x.tail(walker_dart) != st.walker)
    throw StructuralError("walker dart does not start at " + x.vertex_name[st.walker]);

  HierStep out;
  out.next = st;
  out.moved.assign(sys.nseq(), kNone);
  // Length-lex order puts every tail before the sequences copying it.
  for (std::size_t k = 0; k < sys.nseq(); ++k) {
    std::uint32_t copied =
        sys.seqs[k].size() == 1 ? walker_dart : out.moved[sys.suffix_of[k]];
    if (copied == kNone) continue;
    HyperplaneId h = sys.rx->hyperplane_of_edge[dir::edge(copied)];
    std::uint32_t f = sys.move_of(sys.seqs[k][0], st.theta[k], h);
    if (f == kNone) continue;
    out.moved[k] = f;
    out.next.theta[k] = x.head(f);
  }
  out.next.walker = x.head(walker_dart);
  return out;
}

HierTranscript hier_run(const HierSystem& sys, const EdgePath& walker, VertexId from) {
  walker.validate(*sys.x);
  HierTranscript t;
  t.start = initial_state(sys, from);
  t.start.walker = walker.start;
  t.delta.assign(sys.nseq(), EdgePath{});
  for (auto& p : t.delta) p.start = from;
  HierState st = t.start;
  for (std::uint32_t d : walker.steps) {
    HierStep stp = hier_transition(sys, st, d);
    for (std::size_t k = 0; k < sys.nseq(); ++k)
      if (stp.moved[k] != kNone) t.delta[k].steps.push_back(stp.moved[k]);
    st = std::move(stp.next);
  }
  t.end = std::move(st);
  return t;
}

std::vector<std::uint32_t> collapse_sequence(const std::vector<std::uint32_t>& seq) {
  std::vector<std::uint32_t> out;
  for (std::size_t p = 0; p < seq.size(); ++p) {
    bool last = true;
    for (std::size_t q = p + 1; q < seq.size(); ++q)
      if (seq[q] == seq[p]) { last = false; break; }
    if (last) out.push_back(seq[p]);
  }
  return out;
}

EdgePath hier_delta(const HierSystem& sys, const std::vector<std::uint32_t>& seq,
                    const EdgePath& walker, VertexId from) {
  if (seq.empty()) throw StructuralError("empty imitator sequence");
  for (std::uint32_t i : seq)
    if (i >= sys.ys.size()) throw StructuralError("imitator index out of range");
  if (!sys.ys[seq[0]].has_vertex(from))
    throw StructuralError("imitator start " + sys.x->vertex_name[from] +
                          " lies off family member " + std::to_string(seq[0]));
  EdgePath copied = seq.size() == 1
                        ? walker
                        : hier_delta(sys, {seq.begin() + 1, seq.end()}, walker, from);
  copied.validate(*sys.x);
  EdgePath out;
  out.start = from;
  VertexId cur = from;
  for (std::uint32_t d : copied.steps) {
    std::uint32_t f = sys.move_of(seq[0], cur, sys.rx->hyperplane_of_edge[dir::edge(d)]);
    if (f == kNone) continue;
    out.steps.push_back(f);
    cur = sys.x->head(f);
  }
  return out;
}

HierCover hier_cover(const HierSystem& sys, VertexId base, Budgets budgets) {
  const SquareComplex& x = *sys.x;
  HierState init = initial_state(sys, base);

  // Reachable-state bound: walker position times one position per sequence.
  std::size_t guard = budgets.vertices;
  {
    std::uint64_t bound = x.nv();
    for (std::size_t k = 0; k < sys.nseq() && bound < budgets.vertices; ++k)
      bound *= sys.ys[sys.seqs[k][0]].vertex_count();
    guard = std::min<std::uint64_t>(bound, budgets.vertices);
  }

  auto key_of = [](const HierState& s) {
    std::vector<VertexId> k;
    k.reserve(s.theta.size() + 1);
    k.push_back(s.walker);
    k.insert(k.end(), s.theta.begin(), s.theta.end());
    return k;
  };

  std::map<std::vector<VertexId>, std::uint32_t> index;
  std::vector<HierState> states;
  index.emplace(key_of(init), 0);
  states.push_back(init);
  for (std::size_t head = 0; head < states.size(); ++head) {
    HierState st = states[head];
    for (std::uint32_t d : x.darts_at(st.walker)) {
      HierStep stp = hier_transition(sys, st, d);
      auto [it, fresh] = index.emplace(key_of(stp.next), states.size());
      if (!fresh) continue;
      if (states.size() >= guard)
        throw BudgetError("hierarchy state search exceeded " + std::to_string(guard) +
                          " states");
      states.push_back(std::move(stp.next));
    }
  }

  ComplexBuilder b;
  for (std::size_t i = 0; i < states.size(); ++i)
    b.add_vertex(x.vertex_name[states[i].walker] + "@" + std::to_string(i));

  std::vector<std::uint32_t> eid_of(states.size() * x.ne(), kNone);
  std::vector<std::uint32_t> e_img;
  for (std::uint32_t i = 0; i < states.size(); ++i) {
    for (EdgeId e = 0; e < x.ne(); ++e) {
      if (x.tail(dir::fwd(e)) != states[i].walker) continue;
      HierStep stp = hier_transition(sys, states[i], dir::fwd(e));
      std::uint32_t j = index.at(key_of(stp.next));
      EdgeId id = b.add_edge(x.edge_name[e] + "@" + std::to_string(i), i, j);
      eid_of[std::size_t{i} * x.ne() + e] = id;
      e_img.push_back(dir::fwd(e));
    }
  }

  for (std::uint32_t i = 0; i < states.size(); ++i) {
    for (SquareId s = 0; s < x.ns(); ++s) {
      const Square& sq = x.squares[s];
      if (x.tail(sq.side[0]) != states[i].walker) continue;
      std::array<std::uint32_t, 4> sides;
      std::uint32_t cur = i;
      for (int p = 0; p < 4; ++p) {
        std::uint32_t d = sq.side[p];
        EdgeId e = dir::edge(d);
        HierStep stp = hier_transition(sys, states[cur], d);
        std::uint32_t nxt = index.at(key_of(stp.next));
        std::uint32_t tail_state = dir::forward(d) ? cur : nxt;
        sides[p] = dir::make(eid_of[std::size_t{tail_state} * x.ne() + e], dir::forward(d));
        cur = nxt;
      }
      if (cur != i)
        throw PropertyViolation("hierarchy moves around square " + x.square_name[s] +
                                " fail to close up from state " + std::to_string(i));
      b.add_square(x.square_name[s] + "@" + std::to_string(i), sides);
    }
  }

  HierCover hc;
  hc.cover.total = std::make_shared<SquareComplex>(b.build());
  hc.cover.map.domain = hc.cover.total.get();
  hc.cover.map.codomain = &x;
  hc.cover.map.v_img.reserve(states.size());
  for (const HierState& st : states) hc.cover.map.v_img.push_back(st.walker);
  hc.cover.map.e_img = std::move(e_img);
  hc.cover.map.validate();
  hc.cover.base_total = 0;
  for (std::uint32_t i = 0; i < states.size(); ++i)
    if (states[i].walker == base) hc.cover.fiber.push_back(i);
  verify_covering(hc.cover.map);

  std::vector<std::string> fails;
  for (std::size_t i = 0; i < sys.ys.size(); ++i) {
    Elevation el = based_elevation(sys.y_inclusion[i], hc.cover, sys.y_vertex_of_x[i][base],
                                   hc.cover.base_total, budgets);
    const CombinatorialMap& up = el.to_cover;
    Subcomplex img = Subcomplex::empty(*hc.cover.total);
    for (VertexId v = 0; v < up.domain->nv(); ++v) img.v_in[up.v_img[v]] = 1;
    for (EdgeId e = 0; e < up.domain->ne(); ++e) img.e_in[dir::edge(up.e_img[e])] = 1;
    for (SquareId q = 0; q < up.domain->ns(); ++q) img.s_in[up.s_img[q]] = 1;
    if (img.vertex_count() != up.domain->nv() || img.edge_count() != up.domain->ne() ||
        img.square_count() != up.domain->ns())
      fails.push_back("elevation of member " + std::to_string(i) + " is not embedded");
    hc.elevation.push_back(std::move(el));
    hc.image.push_back(std::move(img));
  }

  std::size_t n = sys.ys.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Subcomplex inter = Subcomplex::full(*hc.cover.total);
    std::string members;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      members += (members.empty() ? "" : ",") + std::to_string(i);
      for (std::size_t v = 0; v < inter.v_in.size(); ++v) inter.v_in[v] &= hc.image[i].v_in[v];
      for (std::size_t e = 0; e < inter.e_in.size(); ++e) inter.e_in[e] &= hc.image[i].e_in[e];
      for (std::size_t q = 0; q < inter.s_in.size(); ++q) inter.s_in[q] &= hc.image[i].s_in[q];
    }
    if (!inter.connected())
      fails.push_back("elevation images of members {" + members + "} meet in a disconnected set");
    if (mask + 1 == (1u << n)) {
      std::vector<char> seen(x.nv(), 0);
      for (VertexId v = 0; v < hc.cover.total->nv(); ++v) {
        if (!inter.v_in[v]) continue;
        VertexId down = hc.cover.map.v_img[v];
        if (seen[down])
          fails.push_back("covering identifies two intersection vertices over " +
                          x.vertex_name[down]);
        seen[down] = 1;
      }
    }
  }
  if (!fails.empty()) {
    std::string msg = "hierarchy cover verification failed:";
    for (const std::string& f : fails) msg += "\n  " + f;
    throw PropertyViolation(msg);
  }
  return hc;
}

}  // namespace cubical
