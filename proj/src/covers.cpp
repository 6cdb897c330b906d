#include "cubical/covers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "cubical/oracle.hpp"

namespace cubical {

namespace {

std::string at_name(const std::string& base, std::uint32_t p) {
  return base + "@" + std::to_string(p);
}

std::string pair_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

}  // namespace

GroupAction align_action(const Pi1Basis& basis, const GroupAction& act) {
  if (act.gens.size() != basis.rank())
    throw StructuralError("action has " + std::to_string(act.gens.size()) +
                          " generators, fundamental group basis has " +
                          std::to_string(basis.rank()));
  for (const auto& g : act.gens) {
    if (g.size() != act.npoints || !g.valid())
      throw StructuralError("action generator is not a permutation of " +
                            std::to_string(act.npoints) + " points");
  }
  GroupAction out;
  out.npoints = act.npoints;
  out.gens.resize(basis.rank());
  out.names.resize(basis.rank());
  for (std::size_t i = 0; i < basis.rank(); ++i) out.names[i] = basis.gen_name(i);
  if (act.names.empty()) {
    out.gens = act.gens;
    return out;
  }
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < basis.rank(); ++i) by_name[basis.gen_name(i)] = i;
  std::vector<char> seen(basis.rank(), 0);
  for (std::size_t i = 0; i < act.names.size(); ++i) {
    auto it = by_name.find(act.names[i]);
    if (it == by_name.end())
      throw StructuralError("action generator '" + act.names[i] +
                            "' does not name a basis generator");
    if (seen[it->second])
      throw StructuralError("action repeats generator '" + act.names[i] + "'");
    seen[it->second] = 1;
    out.gens[it->second] = act.gens[i];
  }
  return out;
}

namespace {

void require_transitive(const GroupAction& act) {
  std::vector<char> hit(act.npoints, 0);
  std::deque<std::uint32_t> q;
  hit[0] = 1;
  q.push_back(0);
  while (!q.empty()) {
    std::uint32_t p = q.front();
    q.pop_front();
    for (const auto& g : act.gens)
      for (std::uint32_t n : {g(p), g.inverse()(p)})
        if (!hit[n]) {
          hit[n] = 1;
          q.push_back(n);
        }
  }
  for (std::uint32_t p = 0; p < act.npoints; ++p)
    if (!hit[p]) throw StructuralError("action is not transitive: point " + std::to_string(p));
}

}  // namespace

EdgePath Pi1Basis::tree_path(VertexId v) const {
  std::vector<std::uint32_t> up;
  VertexId at = v;
  while (at != base) {
    std::uint32_t d = parent_dart[at];
    up.push_back(d);
    at = x->tail(d);
  }
  std::reverse(up.begin(), up.end());
  return EdgePath{base, std::move(up)};
}

EdgePath Pi1Basis::generator_loop(std::size_t i) const {
  std::uint32_t d = dir::fwd(gen_edge[i]);
  EdgePath p = tree_path(x->tail(d));
  p.steps.push_back(d);
  return p + tree_path(x->head(d)).reversed(*x);
}

std::vector<std::uint32_t> Pi1Basis::expand(const EdgePath& p) const {
  std::vector<std::uint32_t> w;
  for (std::uint32_t d : p.steps) {
    std::uint32_t g = gen_of_edge[dir::edge(d)];
    if (g == kNone) continue;
    w.push_back(2 * g + (dir::forward(d) ? 0u : 1u));
  }
  return reduce_letters(std::move(w));
}

EdgePath Pi1Basis::loop_of_letters(const std::vector<std::uint32_t>& letters) const {
  EdgePath p{base, {}};
  for (std::uint32_t l : letters) {
    EdgePath g = generator_loop(l >> 1);
    p = p + (l & 1u ? g.reversed(*x) : g);
  }
  return free_reduce(p);
}

Pi1Basis pi1_basis(const SquareComplex& x, VertexId base) {
  if (!x.connected()) throw StructuralError("fundamental group basis needs a connected complex");
  Pi1Basis b;
  b.x = &x;
  b.base = base;
  b.parent_dart.assign(x.nv(), kNone);
  b.in_tree.assign(x.ne(), 0);
  b.gen_of_edge.assign(x.ne(), kNone);
  std::vector<char> seen(x.nv(), 0);
  seen[base] = 1;
  std::deque<VertexId> q{base};
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (std::uint32_t d : x.darts_at(v)) {
      VertexId w = x.head(d);
      if (seen[w]) continue;
      seen[w] = 1;
      b.parent_dart[w] = d;
      b.in_tree[dir::edge(d)] = 1;
      q.push_back(w);
    }
  }
  for (EdgeId e = 0; e < x.ne(); ++e)
    if (!b.in_tree[e]) {
      b.gen_of_edge[e] = static_cast<std::uint32_t>(b.gen_edge.size());
      b.gen_edge.push_back(e);
    }
  return b;
}

std::vector<std::uint32_t> reduce_letters(std::vector<std::uint32_t> w) {
  std::vector<std::uint32_t> r;
  for (std::uint32_t l : w) {
    if (!r.empty() && r.back() == (l ^ 1u))
      r.pop_back();
    else
      r.push_back(l);
  }
  return r;
}

std::vector<std::uint32_t> invert_letters(const std::vector<std::uint32_t>& w) {
  std::vector<std::uint32_t> r(w.rbegin(), w.rend());
  for (auto& l : r) l ^= 1u;
  return r;
}

std::uint32_t CoveringMap::fiber_index(VertexId total_vertex) const {
  for (std::uint32_t i = 0; i < fiber.size(); ++i)
    if (fiber[i] == total_vertex) return i;
  return kNone;
}

EdgePath CoveringMap::lift_path(const EdgePath& p, VertexId start_total) const {
  if (map.v_img[start_total] != p.start)
    throw StructuralError("lift start does not lie over the path start");
  EdgePath out{start_total, {}};
  VertexId at = start_total;
  for (std::uint32_t d : p.steps) {
    std::uint32_t found = kNone;
    for (std::uint32_t c : total->darts_at(at))
      if (map.apply_dir(c) == d) {
        found = c;
        break;
      }
    if (found == kNone)
      throw StructuralError("no lift of " + map.codomain->dir_name(d) + " at " +
                            total->vertex_name[at]);
    out.steps.push_back(found);
    at = total->head(found);
  }
  return out;
}

CoveringMap identity_cover(const SquareComplex& x, VertexId base) {
  CoveringMap mu;
  mu.total = std::make_shared<SquareComplex>(x);
  mu.map = identity_map(*mu.total);
  mu.map.codomain = &x;
  mu.map.validate();
  mu.base_total = base;
  mu.fiber = {base};
  verify_covering(mu.map);
  return mu;
}

CoveringMap rebase_cover(const CoveringMap& mu, VertexId new_base) {
  CoveringMap r = mu;
  r.fiber.clear();
  for (VertexId v = 0; v < r.total->nv(); ++v)
    if (r.map.v_img[v] == new_base) r.fiber.push_back(v);
  if (r.fiber.empty())
    throw StructuralError("no lift of " + mu.base_complex().vertex_name[new_base]);
  r.base_total = r.fiber[0];
  return r;
}

void verify_covering(const CombinatorialMap& m) {
  const SquareComplex& t = *m.domain;
  const SquareComplex& b = *m.codomain;
  if (!t.connected()) throw StructuralError("covering total space is disconnected");
  std::vector<std::size_t> fiber_size(b.nv(), 0);
  for (VertexId v = 0; v < t.nv(); ++v) {
    ++fiber_size[m.v_img[v]];
    std::vector<std::uint32_t> got;
    for (std::uint32_t d : t.darts_at(v)) got.push_back(m.apply_dir(d));
    std::vector<std::uint32_t> want = b.darts_at(m.v_img[v]);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want ||
        std::adjacent_find(got.begin(), got.end()) != got.end())
      throw StructuralError("darts at " + t.vertex_name[v] +
                            " do not map bijectively onto darts at " +
                            b.vertex_name[m.v_img[v]]);
    if (t.corners_at(v).size() != b.corners_at(m.v_img[v]).size())
      throw StructuralError("corner count at " + t.vertex_name[v] + " differs from " +
                            b.vertex_name[m.v_img[v]]);
  }
  for (VertexId v = 0; v < b.nv(); ++v) {
    if (fiber_size[v] == 0)
      throw StructuralError("vertex " + b.vertex_name[v] + " has an empty fiber");
    if (fiber_size[v] != fiber_size[0])
      throw StructuralError("fiber size varies at " + b.vertex_name[v]);
  }
}

CoveringMap cover_from_action(const SquareComplex& x, VertexId base, const GroupAction& act,
                              Budgets budgets) {
  Pi1Basis basis = pi1_basis(x, base);
  GroupAction a = align_action(basis, act);
  if (a.npoints == 0) throw StructuralError("action on an empty point set");
  require_transitive(a);
  std::size_t np = a.npoints;
  if (x.nv() * np > budgets.vertices)
    throw BudgetError("cover would have " + std::to_string(x.nv() * np) + " vertices");

  std::vector<Perm> voltage(x.ne());
  for (EdgeId e = 0; e < x.ne(); ++e)
    voltage[e] = basis.gen_of_edge[e] == kNone ? Perm::identity(np)
                                               : a.gens[basis.gen_of_edge[e]];

  ComplexBuilder bld;
  for (VertexId v = 0; v < x.nv(); ++v)
    for (std::uint32_t p = 0; p < np; ++p) bld.add_vertex(at_name(x.vertex_name[v], p));
  auto vid = [&](VertexId v, std::uint32_t p) { return static_cast<VertexId>(v * np + p); };
  for (EdgeId e = 0; e < x.ne(); ++e)
    for (std::uint32_t p = 0; p < np; ++p)
      bld.add_edge(at_name(x.edge_name[e], p), vid(x.edge_end[e][0], p),
                   vid(x.edge_end[e][1], voltage[e](p)));
  auto eid = [&](EdgeId e, std::uint32_t p) { return static_cast<EdgeId>(e * np + p); };
  for (SquareId s = 0; s < x.ns(); ++s) {
    const auto& sq = x.squares[s];
    for (std::uint32_t p = 0; p < np; ++p) {
      std::uint32_t q = p;
      std::array<std::uint32_t, 4> sides{};
      for (int i = 0; i < 4; ++i) {
        std::uint32_t d = sq.side[i];
        EdgeId e = dir::edge(d);
        if (dir::forward(d)) {
          sides[i] = dir::make(eid(e, q), true);
          q = voltage[e](q);
        } else {
          std::uint32_t qq = voltage[e].inverse()(q);
          sides[i] = dir::make(eid(e, qq), false);
          q = qq;
        }
      }
      if (q != p)
        throw StructuralError("action breaks the relation of square " + x.square_name[s]);
      bld.add_square(at_name(x.square_name[s], p), sides);
    }
  }

  CoveringMap mu;
  mu.total = std::make_shared<SquareComplex>(bld.build());
  mu.map.domain = mu.total.get();
  mu.map.codomain = &x;
  mu.map.v_img.resize(mu.total->nv());
  for (VertexId v = 0; v < x.nv(); ++v)
    for (std::uint32_t p = 0; p < np; ++p) mu.map.v_img[vid(v, p)] = v;
  mu.map.e_img.resize(mu.total->ne());
  for (EdgeId e = 0; e < x.ne(); ++e)
    for (std::uint32_t p = 0; p < np; ++p) mu.map.e_img[eid(e, p)] = dir::fwd(e);
  mu.map.validate();
  verify_covering(mu.map);
  mu.base_total = vid(base, 0);
  for (std::uint32_t p = 0; p < np; ++p) mu.fiber.push_back(vid(base, p));
  return mu;
}

GroupAction monodromy(const CoveringMap& mu) {
  Pi1Basis basis = pi1_basis(mu.base_complex(), mu.base_vertex());
  GroupAction act;
  act.npoints = mu.degree();
  for (std::size_t i = 0; i < basis.rank(); ++i) {
    act.names.push_back(basis.gen_name(i));
    EdgePath loop = basis.generator_loop(i);
    Perm g(mu.degree());
    for (std::uint32_t j = 0; j < mu.degree(); ++j) {
      VertexId end = mu.lift_path(loop, mu.fiber[j]).end(*mu.total);
      std::uint32_t k = mu.fiber_index(end);
      if (k == kNone) throw StructuralError("generator lift left the fiber");
      g.img[j] = k;
    }
    if (!g.valid()) throw StructuralError("monodromy of a generator is not a permutation");
    act.gens.push_back(std::move(g));
  }
  return act;
}

namespace {

struct PullbackData {
  std::vector<VertexId> pv_y, pv_xh;              // per pullback vertex
  std::vector<std::uint32_t> pv_id;               // stride table y * nvh + xh
  std::vector<EdgeId> pe_y;                       // Y edge per pullback edge
  std::vector<std::uint32_t> pe_dart;             // matching cover dart of forward
  std::vector<std::array<VertexId, 2>> pe_ends;   // pullback vertex ids
  std::vector<SquareId> ps_y;                     // Y square per pullback square
  std::vector<VertexId> ps_corner;                // cover lift of corner 0
  std::vector<std::array<std::uint32_t, 4>> ps_sides;  // directed pullback edge codes
};

PullbackData build_pullback(const CombinatorialMap& phi, const CoveringMap& mu,
                            Budgets budgets) {
  const SquareComplex& y = *phi.domain;
  const SquareComplex& xh = *mu.total;
  if (phi.codomain != mu.map.codomain)
    throw StructuralError("map and cover disagree on the base complex");
  PullbackData d;
  d.pv_id.assign(y.nv() * xh.nv(), kNone);
  for (VertexId a = 0; a < y.nv(); ++a)
    for (VertexId b = 0; b < xh.nv(); ++b)
      if (phi.v_img[a] == mu.map.v_img[b]) {
        if (d.pv_y.size() >= budgets.vertices) throw BudgetError("pullback vertex budget");
        d.pv_id[a * xh.nv() + b] = static_cast<std::uint32_t>(d.pv_y.size());
        d.pv_y.push_back(a);
        d.pv_xh.push_back(b);
      }
  auto pv = [&](VertexId a, VertexId b) { return d.pv_id[a * xh.nv() + b]; };

  std::vector<std::vector<EdgeId>> lifts_of_edge(phi.codomain->ne());
  for (EdgeId eh = 0; eh < xh.ne(); ++eh)
    lifts_of_edge[dir::edge(mu.map.e_img[eh])].push_back(eh);

  std::unordered_map<std::uint64_t, std::uint32_t> pe_id;
  auto pe_key = [](EdgeId f, std::uint32_t dart) {
    return (static_cast<std::uint64_t>(f) << 32) | dart;
  };
  for (EdgeId f = 0; f < y.ne(); ++f) {
    std::uint32_t c = phi.apply_dir(dir::fwd(f));
    for (EdgeId eh : lifts_of_edge[dir::edge(c)]) {
      std::uint32_t dh = mu.map.e_img[eh] == c ? dir::fwd(eh) : dir::rev(dir::fwd(eh));
      pe_id[pe_key(f, dh)] = static_cast<std::uint32_t>(d.pe_y.size());
      d.pe_y.push_back(f);
      d.pe_dart.push_back(dh);
      d.pe_ends.push_back({pv(y.edge_end[f][0], xh.tail(dh)), pv(y.edge_end[f][1], xh.head(dh))});
    }
  }

  std::vector<std::vector<VertexId>> fiber_over(phi.codomain->nv());
  for (VertexId b = 0; b < xh.nv(); ++b) fiber_over[mu.map.v_img[b]].push_back(b);
  for (SquareId s = 0; s < y.ns(); ++s) {
    const auto& sq = y.squares[s];
    std::array<std::uint32_t, 4> c{};
    for (int i = 0; i < 4; ++i) c[i] = phi.apply_dir(sq.side[i]);
    for (VertexId x0 : fiber_over[phi.codomain->tail(c[0])]) {
      VertexId at = x0;
      std::array<std::uint32_t, 4> dh{};
      for (int i = 0; i < 4; ++i) {
        std::uint32_t found = kNone;
        for (std::uint32_t cand : xh.darts_at(at))
          if (mu.map.apply_dir(cand) == c[i]) {
            found = cand;
            break;
          }
        if (found == kNone) throw StructuralError("square boundary fails to lift");
        dh[i] = found;
        at = xh.head(found);
      }
      if (at != x0) throw StructuralError("lifted square boundary does not close");
      std::array<std::uint32_t, 4> sides{};
      for (int i = 0; i < 4; ++i) {
        std::uint32_t a = sq.side[i];
        std::uint32_t fwd_dart = dir::forward(a) ? dh[i] : dir::rev(dh[i]);
        sides[i] = 2 * pe_id.at(pe_key(dir::edge(a), fwd_dart)) + (dir::forward(a) ? 0u : 1u);
      }
      d.ps_y.push_back(s);
      d.ps_corner.push_back(x0);
      d.ps_sides.push_back(sides);
    }
  }
  return d;
}

}  // namespace

std::vector<Elevation> elevations(const CombinatorialMap& phi, const CoveringMap& mu,
                                  Budgets budgets) {
  const SquareComplex& y = *phi.domain;
  const SquareComplex& xh = *mu.total;
  if (!y.connected()) throw StructuralError("elevations need a connected domain");
  PullbackData d = build_pullback(phi, mu, budgets);

  std::vector<std::uint32_t> comp(d.pv_y.size());
  for (std::uint32_t i = 0; i < comp.size(); ++i) comp[i] = i;
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t a) {
    while (comp[a] != a) a = comp[a] = comp[comp[a]];
    return a;
  };
  for (const auto& ends : d.pe_ends) {
    std::uint32_t a = find(ends[0]), b = find(ends[1]);
    if (a != b) comp[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::uint32_t> roots;
  std::vector<std::uint32_t> comp_index(d.pv_y.size(), kNone);
  for (std::uint32_t i = 0; i < d.pv_y.size(); ++i)
    if (find(i) == i) {
      comp_index[i] = static_cast<std::uint32_t>(roots.size());
      roots.push_back(i);
    }

  std::vector<Elevation> out(roots.size());
  std::vector<std::vector<std::uint32_t>> vloc(roots.size());
  std::vector<std::uint32_t> v_local(d.pv_y.size(), kNone);
  std::vector<ComplexBuilder> builders(roots.size());
  for (std::uint32_t i = 0; i < d.pv_y.size(); ++i) {
    std::uint32_t c = comp_index[find(i)];
    v_local[i] = builders[c].add_vertex(
        pair_name(y.vertex_name[d.pv_y[i]], xh.vertex_name[d.pv_xh[i]]));
    vloc[c].push_back(i);
  }
  std::vector<std::vector<std::pair<EdgeId, std::uint32_t>>> eimgs(roots.size());
  for (std::uint32_t pe = 0; pe < d.pe_y.size(); ++pe) {
    std::uint32_t c = comp_index[find(d.pe_ends[pe][0])];
    EdgeId f = d.pe_y[pe];
    builders[c].add_edge(
        pair_name(y.edge_name[f], xh.edge_name[dir::edge(d.pe_dart[pe])]),
        v_local[d.pe_ends[pe][0]], v_local[d.pe_ends[pe][1]]);
    eimgs[c].push_back({f, d.pe_dart[pe]});
  }
  std::vector<std::uint32_t> e_local(d.pe_y.size(), kNone);
  {
    std::vector<std::uint32_t> counts(roots.size(), 0);
    for (std::uint32_t pe = 0; pe < d.pe_y.size(); ++pe)
      e_local[pe] = counts[comp_index[find(d.pe_ends[pe][0])]]++;
  }
  for (std::uint32_t ps = 0; ps < d.ps_y.size(); ++ps) {
    std::uint32_t pv0 = d.pe_ends[dir::edge(d.ps_sides[ps][0])][0];
    std::uint32_t sd0 = d.ps_sides[ps][0];
    std::uint32_t c = comp_index[find(dir::forward(sd0) ? pv0 : d.pe_ends[dir::edge(sd0)][1])];
    std::array<std::uint32_t, 4> sides{};
    for (int i = 0; i < 4; ++i)
      sides[i] = 2 * e_local[dir::edge(d.ps_sides[ps][i])] + (d.ps_sides[ps][i] & 1u);
    builders[c].add_square(
        pair_name(y.square_name[d.ps_y[ps]], xh.vertex_name[d.ps_corner[ps]]), sides);
  }

  for (std::uint32_t c = 0; c < roots.size(); ++c) {
    Elevation& el = out[c];
    el.total = std::make_shared<SquareComplex>(builders[c].build());
    el.to_domain.domain = el.total.get();
    el.to_domain.codomain = &y;
    el.to_cover.domain = el.total.get();
    el.to_cover.codomain = &xh;
    for (std::uint32_t i : vloc[c]) {
      el.to_domain.v_img.push_back(d.pv_y[i]);
      el.to_cover.v_img.push_back(d.pv_xh[i]);
    }
    for (const auto& [f, dh] : eimgs[c]) {
      el.to_domain.e_img.push_back(dir::fwd(f));
      el.to_cover.e_img.push_back(dh);
    }
    el.to_domain.validate();
    el.to_cover.validate();
    verify_covering(el.to_domain);
  }
  return out;
}

Elevation based_elevation(const CombinatorialMap& phi, const CoveringMap& mu, VertexId y_base,
                          VertexId xhat_base, Budgets budgets) {
  if (phi.v_img[y_base] != mu.map.v_img[xhat_base])
    throw StructuralError("basepoints do not lie over the same vertex");
  std::vector<Elevation> all = elevations(phi, mu, budgets);
  std::string want =
      pair_name(phi.domain->vertex_name[y_base], mu.total->vertex_name[xhat_base]);
  for (Elevation& el : all) {
    auto v = el.total->try_vertex_id(want);
    if (v) {
      el.base = *v;
      return std::move(el);
    }
  }
  throw StructuralError("no pullback component through " + want);
}

CoveringMap refine(const SquareComplex& x, VertexId base,
                   const std::vector<const CoveringMap*>& covers, Budgets budgets) {
  if (covers.empty()) throw StructuralError("refine of an empty cover list");
  std::vector<GroupAction> acts;
  for (const CoveringMap* mu : covers) {
    if (mu->map.codomain != &x || mu->base_vertex() != base)
      throw StructuralError("refine inputs must share the base complex and basepoint");
    acts.push_back(monodromy(*mu));
  }
  std::size_t rank = acts[0].gens.size();

  std::map<std::vector<std::uint32_t>, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::uint32_t> start(covers.size(), 0);
  index[start] = 0;
  tuples.push_back(start);
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t t = q.front();
    q.pop_front();
    for (std::size_t i = 0; i < rank; ++i)
      for (int inv = 0; inv < 2; ++inv) {
        std::vector<std::uint32_t> nt(covers.size());
        for (std::size_t k = 0; k < covers.size(); ++k) {
          const Perm& g = acts[k].gens[i];
          nt[k] = inv ? g.inverse()(tuples[t][k]) : g(tuples[t][k]);
        }
        if (index.emplace(nt, static_cast<std::uint32_t>(tuples.size())).second) {
          tuples.push_back(nt);
          if (tuples.size() * x.nv() > budgets.vertices)
            throw BudgetError("refined cover vertex budget");
          q.push_back(static_cast<std::uint32_t>(tuples.size() - 1));
        }
      }
  }

  GroupAction act;
  act.npoints = tuples.size();
  for (std::size_t i = 0; i < rank; ++i) {
    Perm g(tuples.size());
    for (std::uint32_t t = 0; t < tuples.size(); ++t) {
      std::vector<std::uint32_t> nt(covers.size());
      for (std::size_t k = 0; k < covers.size(); ++k) nt[k] = acts[k].gens[i](tuples[t][k]);
      g.img[t] = index.at(nt);
    }
    act.gens.push_back(std::move(g));
    act.names.push_back(acts[0].names[i]);
  }
  return cover_from_action(x, base, act, budgets);
}

CoveringMap regular_closure(const CoveringMap& mu, Budgets budgets) {
  GroupAction mono = monodromy(mu);
  std::map<Perm, std::uint32_t> index;
  std::vector<Perm> elems;
  Perm id = Perm::identity(mu.degree());
  index[id] = 0;
  elems.push_back(id);
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t e = q.front();
    q.pop_front();
    for (const Perm& g : mono.gens) {
      Perm n = elems[e] * g;
      if (index.emplace(n, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(n);
        if (elems.size() > budgets.orbit) throw BudgetError("monodromy group orbit budget");
        q.push_back(static_cast<std::uint32_t>(elems.size() - 1));
      }
    }
  }
  GroupAction act;
  act.npoints = elems.size();
  act.names = mono.names;
  for (const Perm& g : mono.gens) {
    Perm t(elems.size());
    for (std::uint32_t e = 0; e < elems.size(); ++e) t.img[e] = index.at(elems[e] * g);
    act.gens.push_back(std::move(t));
  }
  return cover_from_action(mu.base_complex(), mu.base_vertex(), act, budgets);
}

Perm SubgroupRep::eval_letters(const std::vector<std::uint32_t>& letters) const {
  Perm r = Perm::identity(action.npoints);
  for (std::uint32_t l : letters)
    r = r * (l & 1u ? action.gens[l >> 1].inverse() : action.gens[l >> 1]);
  return r;
}

Perm SubgroupRep::eval_loop(const EdgePath& loop) const {
  loop.validate(ambient());
  if (loop.start != base() || !loop.is_closed(ambient()))
    throw StructuralError("evaluation needs a loop at the basepoint");
  return eval_letters(basis.expand(loop));
}

void SubgroupRep::validate() const {
  GroupAction aligned = align_action(basis, action);
  require_transitive(aligned);
  const SquareComplex& x = ambient();
  for (SquareId s = 0; s < x.ns(); ++s) {
    EdgePath b{x.tail(x.squares[s].side[0]),
               {x.squares[s].side.begin(), x.squares[s].side.end()}};
    if (!eval_letters(basis.expand(b)).is_identity())
      throw StructuralError("action breaks the relation of square " + x.square_name[s]);
  }
}

SubgroupRep full_group(const SquareComplex& x, VertexId base) {
  SubgroupRep s;
  s.basis = pi1_basis(x, base);
  s.action.npoints = 1;
  for (std::size_t i = 0; i < s.basis.rank(); ++i) {
    s.action.names.push_back(s.basis.gen_name(i));
    s.action.gens.push_back(Perm::identity(1));
  }
  return s;
}

SubgroupRep subgroup_from_action(const SquareComplex& x, VertexId base, GroupAction act) {
  SubgroupRep s;
  s.basis = pi1_basis(x, base);
  s.action = align_action(s.basis, act);
  s.validate();
  return s;
}

SubgroupRep subgroup_of_cover(const CoveringMap& mu) {
  SubgroupRep s;
  s.basis = pi1_basis(mu.base_complex(), mu.base_vertex());
  s.action = monodromy(mu);
  s.validate();
  return s;
}

CoveringMap cover_of_subgroup(const SubgroupRep& s, Budgets budgets) {
  return cover_from_action(s.ambient(), s.base(), s.action, budgets);
}

SubgroupRep intersect_subgroups(const std::vector<const SubgroupRep*>& subs, Budgets budgets) {
  if (subs.empty()) throw StructuralError("intersection of an empty subgroup list");
  const SquareComplex* x = subs[0]->basis.x;
  VertexId base = subs[0]->base();
  for (const SubgroupRep* s : subs)
    if (s->basis.x != x || s->base() != base)
      throw StructuralError("intersected subgroups must share ambient complex and basepoint");
  std::size_t rank = subs[0]->basis.rank();

  std::map<std::vector<std::uint32_t>, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::uint32_t> start(subs.size(), 0);
  index[start] = 0;
  tuples.push_back(start);
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t t = q.front();
    q.pop_front();
    for (std::size_t i = 0; i < rank; ++i)
      for (int inv = 0; inv < 2; ++inv) {
        std::vector<std::uint32_t> nt(subs.size());
        for (std::size_t k = 0; k < subs.size(); ++k) {
          const Perm& g = subs[k]->action.gens[i];
          nt[k] = inv ? g.inverse()(tuples[t][k]) : g(tuples[t][k]);
        }
        if (index.emplace(nt, static_cast<std::uint32_t>(tuples.size())).second) {
          tuples.push_back(nt);
          if (tuples.size() > budgets.orbit) throw BudgetError("subgroup intersection budget");
          q.push_back(static_cast<std::uint32_t>(tuples.size() - 1));
        }
      }
  }
  SubgroupRep out;
  out.basis = subs[0]->basis;
  out.action.npoints = tuples.size();
  for (std::size_t i = 0; i < rank; ++i) {
    Perm g(tuples.size());
    for (std::uint32_t t = 0; t < tuples.size(); ++t) {
      std::vector<std::uint32_t> nt(subs.size());
      for (std::size_t k = 0; k < subs.size(); ++k) nt[k] = subs[k]->action.gens[i](tuples[t][k]);
      g.img[t] = index.at(nt);
    }
    out.action.gens.push_back(std::move(g));
    out.action.names.push_back(out.basis.gen_name(i));
  }
  return out;
}

SubgroupRep normal_core(const SubgroupRep& s, Budgets budgets) {
  std::map<Perm, std::uint32_t> index;
  std::vector<Perm> elems;
  Perm id = Perm::identity(s.action.npoints);
  index[id] = 0;
  elems.push_back(id);
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t e = q.front();
    q.pop_front();
    for (const Perm& g : s.action.gens) {
      Perm n = elems[e] * g;
      if (index.emplace(n, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(n);
        if (elems.size() > budgets.orbit) throw BudgetError("normal core orbit budget");
        q.push_back(static_cast<std::uint32_t>(elems.size() - 1));
      }
    }
  }
  SubgroupRep out;
  out.basis = s.basis;
  out.action.npoints = elems.size();
  for (std::size_t i = 0; i < s.action.gens.size(); ++i) {
    Perm t(elems.size());
    for (std::uint32_t e = 0; e < elems.size(); ++e)
      t.img[e] = index.at(elems[e] * s.action.gens[i]);
    out.action.gens.push_back(std::move(t));
    out.action.names.push_back(out.basis.gen_name(i));
  }
  return out;
}

bool is_normal(const SubgroupRep& s) {
  SchreierGens g = schreier_generators(s);
  for (const auto& w : g.words)
    if (!s.eval_letters(w).is_identity()) return false;
  return true;
}

SubgroupRep conjugate_subgroup(const SubgroupRep& s, const EdgePath& g) {
  std::uint32_t q = s.eval_loop(g).inverse()(0);
  if (q == 0) return s;
  auto swap01 = [&](std::uint32_t p) { return p == 0 ? q : p == q ? 0u : p; };
  SubgroupRep out = s;
  for (Perm& perm : out.action.gens) {
    Perm n(perm.size());
    for (std::uint32_t p = 0; p < perm.size(); ++p) n.img[swap01(p)] = swap01(perm(p));
    perm = std::move(n);
  }
  return out;
}

SubgroupRep subgroup_preimage(const SubgroupRep& s, std::size_t inner_points,
                              const std::function<Perm(const EdgePath&)>& inner,
                              Budgets budgets) {
  SchreierGens sch = schreier_generators(s);
  std::size_t n = s.action.npoints;
  std::size_t rank = s.basis.rank();
  // inner action of each (point, generator) transversal correction
  std::vector<std::vector<Perm>> corr(n, std::vector<Perm>(rank));
  for (std::uint32_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < rank; ++i) {
      std::uint32_t pp = s.action.gens[i](p);
      EdgePath loop = free_reduce(sch.transversal_loops[p] + s.basis.generator_loop(i) +
                                  sch.transversal_loops[pp].reversed(s.ambient()));
      corr[p][i] = inner(loop);
      if (corr[p][i].size() != inner_points || !corr[p][i].valid())
        throw StructuralError("inner action is not a permutation of the declared points");
    }

  auto key = [&](std::uint32_t p, std::uint32_t c) {
    return static_cast<std::uint64_t>(p) * inner_points + c;
  };
  std::map<std::uint64_t, std::uint32_t> index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pts;
  index[key(0, 0)] = 0;
  pts.push_back({0, 0});
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t t = q.front();
    q.pop_front();
    auto [p, c] = pts[t];
    for (std::size_t i = 0; i < rank; ++i)
      for (int inv = 0; inv < 2; ++inv) {
        std::uint32_t np, nc;
        if (!inv) {
          np = s.action.gens[i](p);
          nc = corr[p][i](c);
        } else {
          np = s.action.gens[i].inverse()(p);
          nc = corr[np][i].inverse()(c);
        }
        if (index.emplace(key(np, nc), static_cast<std::uint32_t>(pts.size())).second) {
          pts.push_back({np, nc});
          if (pts.size() > budgets.orbit) throw BudgetError("subgroup preimage orbit budget");
          q.push_back(static_cast<std::uint32_t>(pts.size() - 1));
        }
      }
  }
  SubgroupRep out;
  out.basis = s.basis;
  out.action.npoints = pts.size();
  for (std::size_t i = 0; i < rank; ++i) {
    Perm g(pts.size());
    for (std::uint32_t t = 0; t < pts.size(); ++t) {
      auto [p, c] = pts[t];
      g.img[t] = index.at(key(s.action.gens[i](p), corr[p][i](c)));
    }
    out.action.gens.push_back(std::move(g));
    out.action.names.push_back(out.basis.gen_name(i));
  }
  return out;
}

SchreierGens schreier_generators(const SubgroupRep& s, const WordOracle* oracle) {
  std::size_t n = s.action.npoints;
  std::size_t rank = s.basis.rank();
  SchreierGens out;
  out.transversal_words.assign(n, {});
  std::vector<char> seen(n, 0);
  std::vector<char> used(n * std::max<std::size_t>(rank, 1), 0);
  seen[0] = 1;
  std::deque<std::uint32_t> q{0};
  while (!q.empty()) {
    std::uint32_t p = q.front();
    q.pop_front();
    for (std::size_t i = 0; i < rank; ++i)
      for (std::uint32_t l : {2 * static_cast<std::uint32_t>(i),
                              2 * static_cast<std::uint32_t>(i) + 1}) {
        std::uint32_t to = l & 1u ? s.action.gens[i].inverse()(p) : s.action.gens[i](p);
        if (seen[to]) continue;
        seen[to] = 1;
        out.transversal_words[to] = out.transversal_words[p];
        out.transversal_words[to].push_back(l);
        used[(l & 1u ? to : p) * rank + i] = 1;
        q.push_back(to);
      }
  }
  for (std::uint32_t p = 0; p < n; ++p)
    out.transversal_loops.push_back(s.basis.loop_of_letters(out.transversal_words[p]));

  std::set<std::vector<std::uint32_t>> literal;
  std::set<std::string> classes;
  std::unique_ptr<WordOracle> fallback;
  if (!oracle && s.ambient().ns() == 0)
    fallback = std::make_unique<FreeReductionOracle>(s.ambient());
  const WordOracle* orc = oracle ? oracle : fallback.get();
  for (std::uint32_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < rank; ++i) {
      if (used[p * rank + i]) continue;
      std::uint32_t to = s.action.gens[i](p);
      std::vector<std::uint32_t> w = out.transversal_words[p];
      w.push_back(2 * static_cast<std::uint32_t>(i));
      for (std::uint32_t l : invert_letters(out.transversal_words[to])) w.push_back(l);
      w = reduce_letters(std::move(w));
      if (w.empty()) continue;
      if (!literal.insert(w).second) continue;
      EdgePath loop = s.basis.loop_of_letters(w);
      if (orc) {
        if (orc->trivial(loop)) continue;
        if (!classes.insert(orc->canonical_key(loop)).second) continue;
      }
      out.words.push_back(std::move(w));
      out.loops.push_back(std::move(loop));
    }
  return out;
}

std::vector<EdgePath> based_paths(const SquareComplex& x, VertexId base, std::size_t max_len,
                                  std::size_t guard) {
  std::vector<EdgePath> out{EdgePath{base, {}}};
  std::size_t lo = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i) {
      VertexId at = out[i].end(x);
      for (std::uint32_t d : x.darts_at(at)) {
        EdgePath p = out[i];
        p.steps.push_back(d);
        out.push_back(std::move(p));
        if (out.size() > guard) throw BudgetError("based path enumeration budget");
      }
    }
    lo = hi;
  }
  return out;
}

}  // namespace cubical
