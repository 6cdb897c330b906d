#include "cubical/corpus.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace cubical::corpus {

SquareComplex one_square_torus() {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  EdgeId a = b.add_edge("a", x, x);
  EdgeId bb = b.add_edge("b", x, x);
  b.add_square("s", {dir::fwd(a), dir::fwd(bb), dir::make(a, false), dir::make(bb, false)});
  return b.build();
}

SquareComplex torus_2x2() {
  ComplexBuilder b;
  VertexId v[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      v[r][c] = b.add_vertex("v" + std::to_string(r) + std::to_string(c));
  EdgeId h[2][2], u[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      h[r][c] = b.add_edge("h" + std::to_string(r) + std::to_string(c), v[r][c], v[r][1 - c]);
      u[r][c] = b.add_edge("u" + std::to_string(r) + std::to_string(c), v[r][c], v[1 - r][c]);
    }
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      b.add_square("s" + std::to_string(r) + std::to_string(c),
                   {dir::fwd(h[r][c]), dir::fwd(u[r][1 - c]), dir::make(h[1 - r][c], false),
                    dir::make(u[r][c], false)});
  return b.build();
}

SquareComplex rose(int rank) {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  for (int i = 0; i < rank; ++i) b.add_edge(std::string(1, static_cast<char>('a' + i)), x, x);
  return b.build();
}

SquareComplex r2() {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  VertexId a1 = b.add_vertex("a1");
  VertexId b1 = b.add_vertex("b1");
  b.add_edge("a1", x, a1);
  b.add_edge("a2", a1, x);
  b.add_edge("b1", x, b1);
  b.add_edge("b2", b1, x);
  return b.build();
}

SquareComplex grid(int rows, int cols) {
  ComplexBuilder b;
  auto name = [](int r, int c) { return "v" + std::to_string(r) + "_" + std::to_string(c); };
  std::vector<std::vector<VertexId>> v(rows + 1, std::vector<VertexId>(cols + 1));
  for (int r = 0; r <= rows; ++r)
    for (int c = 0; c <= cols; ++c) v[r][c] = b.add_vertex(name(r, c));
  std::vector<std::vector<EdgeId>> h(rows + 1, std::vector<EdgeId>(cols));
  std::vector<std::vector<EdgeId>> u(rows, std::vector<EdgeId>(cols + 1));
  for (int r = 0; r <= rows; ++r)
    for (int c = 0; c < cols; ++c)
      h[r][c] = b.add_edge("h" + std::to_string(r) + "_" + std::to_string(c), v[r][c],
                           v[r][c + 1]);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c <= cols; ++c)
      u[r][c] = b.add_edge("u" + std::to_string(r) + "_" + std::to_string(c), v[r][c],
                           v[r + 1][c]);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      b.add_square("s" + std::to_string(r) + "_" + std::to_string(c),
                   {dir::fwd(h[r][c]), dir::fwd(u[r][c + 1]), dir::make(h[r + 1][c], false),
                    dir::make(u[r][c], false)});
  return b.build();
}

SquareComplex tree_from_parents(const std::vector<int>& parents) {
  ComplexBuilder b;
  std::vector<VertexId> v(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) v[i] = b.add_vertex("t" + std::to_string(i));
  for (std::size_t i = 1; i < parents.size(); ++i)
    b.add_edge("c" + std::to_string(i), v[parents[i]], v[i]);
  return b.build();
}

SquareComplex path_tree(int vertices) {
  std::vector<int> p(vertices);
  for (int i = 1; i < vertices; ++i) p[i] = i - 1;
  return tree_from_parents(p);
}

SquareComplex star_tree(int leaves) {
  std::vector<int> p(leaves + 1, 0);
  return tree_from_parents(p);
}

SquareComplex binary_tree(int depth) {
  int n = (1 << (depth + 1)) - 1;
  std::vector<int> p(n);
  for (int i = 1; i < n; ++i) p[i] = (i - 1) / 2;
  return tree_from_parents(p);
}

std::vector<raag::DefGraph> small_graphs() {
  using raag::DefGraph;
  std::vector<DefGraph> out;
  out.push_back(DefGraph::discrete({"a"}));
  out.push_back(DefGraph::discrete({"a", "b"}));
  out.push_back(DefGraph::complete({"a", "b"}));
  out.push_back(DefGraph::discrete({"a", "b", "c"}));
  DefGraph one_edge = DefGraph::discrete({"a", "b", "c"});
  one_edge.add_edge(0, 1);
  out.push_back(one_edge);
  DefGraph path = DefGraph::discrete({"a", "b", "c"});
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  out.push_back(path);
  out.push_back(DefGraph::complete({"a", "b", "c"}));
  return out;
}

std::vector<Subcomplex> all_subcomplexes(const SquareComplex& x, std::size_t cell_limit) {
  if (x.nv() + x.ne() + x.ns() > cell_limit)
    throw BudgetError("subcomplex enumeration limited to " + std::to_string(cell_limit) +
                      " cells");
  std::vector<Subcomplex> out;
  // Subsets of squares force edges; free edges force vertices.
  for (std::uint32_t smask = 0; smask < (1u << x.ns()); ++smask) {
    std::vector<char> e_base(x.ne(), 0);
    for (std::uint32_t s = 0; s < x.ns(); ++s)
      if (smask & (1u << s))
        for (auto side : x.squares[s].side) e_base[side >> 1] = 1;
    std::vector<EdgeId> free_edges;
    for (std::uint32_t e = 0; e < x.ne(); ++e)
      if (!e_base[e]) free_edges.push_back(e);
    for (std::uint32_t emask = 0; emask < (1u << free_edges.size()); ++emask) {
      std::vector<char> e_in = e_base;
      for (std::size_t k = 0; k < free_edges.size(); ++k)
        if (emask & (1u << k)) e_in[free_edges[k]] = 1;
      std::vector<char> v_base(x.nv(), 0);
      for (std::uint32_t e = 0; e < x.ne(); ++e)
        if (e_in[e]) v_base[x.edge_end[e][0]] = v_base[x.edge_end[e][1]] = 1;
      std::vector<VertexId> free_vertices;
      for (std::uint32_t v = 0; v < x.nv(); ++v)
        if (!v_base[v]) free_vertices.push_back(v);
      for (std::uint32_t vmask = 0; vmask < (1u << free_vertices.size()); ++vmask) {
        Subcomplex sc = Subcomplex::empty(x);
        sc.v_in = v_base;
        for (std::size_t k = 0; k < free_vertices.size(); ++k)
          if (vmask & (1u << k)) sc.v_in[free_vertices[k]] = 1;
        sc.e_in = e_in;
        for (std::uint32_t s = 0; s < x.ns(); ++s) sc.s_in[s] = (smask >> s) & 1u;
        out.push_back(std::move(sc));
      }
    }
  }
  return out;
}

Subcomplex sub_by_edges(const SquareComplex& x, const std::vector<std::string>& edge_names) {
  std::vector<EdgeId> es;
  es.reserve(edge_names.size());
  for (const auto& n : edge_names) es.push_back(x.edge_id(n));
  return Subcomplex::span(x, {}, es, {});
}

Subcomplex sub_by_vertex(const SquareComplex& x, const std::string& vertex_name) {
  return Subcomplex::span(x, {x.vertex_id(vertex_name)}, {}, {});
}

Inclusion make_inclusion(const std::string& name, const SquareComplex& parent,
                         const Subcomplex& s) {
  Inclusion inc;
  inc.name = name;
  std::vector<VertexId> vmap;
  std::vector<EdgeId> emap;
  inc.sub = std::make_shared<SquareComplex>(s.materialize(&vmap, &emap));
  inc.map = inclusion_map(*inc.sub, parent, vmap, emap);
  return inc;
}

std::vector<NamedComplex> analysis_corpus() {
  std::vector<NamedComplex> out;
  auto add = [&out](const std::string& name, SquareComplex x) {
    out.push_back({name, std::make_shared<SquareComplex>(std::move(x))});
  };
  add("one-square-torus", one_square_torus());
  add("torus-2x2", torus_2x2());
  for (int rank = 1; rank <= 3; ++rank)
    add("subdivided-rose-" + std::to_string(rank), subdivide(rose(rank)));
  auto graphs = small_graphs();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    SquareComplex s = raag::salvetti(graphs[i]);
    add("salvetti-" + std::to_string(i), s);
    add("salvetti-" + std::to_string(i) + "-subdivided", subdivide(s));
  }
  return out;
}

namespace {

bool try_edge_assignment(const SquareComplex& a, const SquareComplex& b,
                         const std::vector<VertexId>& vperm, std::vector<std::uint32_t>& eimg,
                         std::vector<char>& used, std::size_t e) {
  if (e == a.ne()) {
    CombinatorialMap m;
    m.domain = &a;
    m.codomain = &b;
    m.v_img = vperm;
    m.e_img = eimg;
    try {
      m.validate();
    } catch (const StructuralError&) {
      return false;
    }
    std::vector<char> sq_used(b.ns(), 0);
    for (SquareId s : m.s_img) {
      if (sq_used[s]) return false;
      sq_used[s] = 1;
    }
    return true;
  }
  VertexId ta = vperm[a.edge_end[e][0]], ha = vperm[a.edge_end[e][1]];
  for (EdgeId f = 0; f < b.ne(); ++f) {
    if (used[f]) continue;
    for (bool fwd : {true, false}) {
      std::uint32_t code = dir::make(f, fwd);
      if (b.tail(code) != ta || b.head(code) != ha) continue;
      eimg[e] = code;
      used[f] = 1;
      if (try_edge_assignment(a, b, vperm, eimg, used, e + 1)) return true;
      used[f] = 0;
    }
  }
  return false;
}

}  // namespace

bool isomorphic(const SquareComplex& a, const SquareComplex& b) {
  if (a.nv() != b.nv() || a.ne() != b.ne() || a.ns() != b.ns()) return false;
  std::vector<VertexId> perm(b.nv());
  std::iota(perm.begin(), perm.end(), 0u);
  std::sort(perm.begin(), perm.end());
  do {
    std::vector<VertexId> vperm(a.nv());
    bool degree_ok = true;
    for (VertexId v = 0; v < a.nv(); ++v) {
      vperm[v] = perm[v];
      if (a.darts_at(v).size() != b.darts_at(perm[v]).size()) degree_ok = false;
    }
    if (!degree_ok) continue;
    std::vector<std::uint32_t> eimg(a.ne(), kNone);
    std::vector<char> used(b.ne(), 0);
    if (try_edge_assignment(a, b, vperm, eimg, used, 0)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace cubical::corpus
