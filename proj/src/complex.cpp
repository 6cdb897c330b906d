#include "cubical/complex.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace cubical {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

std::uint64_t Perm::order() const {
  std::vector<char> seen(img.size(), 0);
  std::uint64_t result = 1;
  for (std::uint32_t i = 0; i < img.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::uint32_t j = i; !seen[j]; j = img[j]) {
      seen[j] = 1;
      ++len;
    }
    result = lcm_u64(result, len);
  }
  return result;
}

VertexId SquareComplex::vertex_id(const std::string& name) const {
  auto it = vertex_by_name_.find(name);
  if (it == vertex_by_name_.end()) throw StructuralError("unknown vertex: " + name);
  return it->second;
}

EdgeId SquareComplex::edge_id(const std::string& name) const {
  auto it = edge_by_name_.find(name);
  if (it == edge_by_name_.end()) throw StructuralError("unknown edge: " + name);
  return it->second;
}

SquareId SquareComplex::square_id(const std::string& name) const {
  auto it = square_by_name_.find(name);
  if (it == square_by_name_.end()) throw StructuralError("unknown square: " + name);
  return it->second;
}

std::optional<VertexId> SquareComplex::try_vertex_id(const std::string& name) const {
  auto it = vertex_by_name_.find(name);
  if (it == vertex_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> SquareComplex::try_edge_id(const std::string& name) const {
  auto it = edge_by_name_.find(name);
  if (it == edge_by_name_.end()) return std::nullopt;
  return it->second;
}

std::string SquareComplex::dir_name(std::uint32_t code) const {
  const std::string& n = edge_name[code >> 1];
  return (code & 1u) ? "-" + n : n;
}

bool SquareComplex::is_corner_pair(VertexId v, std::uint32_t dart_a, std::uint32_t dart_b) const {
  if (dart_a > dart_b) std::swap(dart_a, dart_b);
  for (const Corner& c : corners_at_[v])
    if (c.dart_a == dart_a && c.dart_b == dart_b) return true;
  return false;
}

void SquareComplex::finalize() {
  vertex_by_name_.clear();
  edge_by_name_.clear();
  square_by_name_.clear();
  for (std::uint32_t i = 0; i < vertex_name.size(); ++i) {
    if (!vertex_by_name_.emplace(vertex_name[i], i).second)
      throw StructuralError("duplicate vertex name: " + vertex_name[i]);
  }
  for (std::uint32_t i = 0; i < edge_name.size(); ++i) {
    if (!edge_by_name_.emplace(edge_name[i], i).second)
      throw StructuralError("duplicate edge name: " + edge_name[i]);
    for (VertexId v : edge_end[i])
      if (v >= nv()) throw StructuralError("edge " + edge_name[i] + " references missing vertex");
  }
  for (std::uint32_t i = 0; i < squares.size(); ++i) {
    if (!square_by_name_.emplace(square_name[i], i).second)
      throw StructuralError("duplicate square name: " + square_name[i]);
    for (int k = 0; k < 4; ++k) {
      std::uint32_t c = squares[i].side[k];
      if ((c >> 1) >= ne())
        throw StructuralError("square " + square_name[i] + " references missing edge");
      std::uint32_t d = squares[i].side[(k + 1) % 4];
      if (head(c) != tail(d))
        throw StructuralError("square " + square_name[i] + " boundary does not chain at side " +
                              std::to_string(k));
    }
  }

  darts_at_.assign(nv(), {});
  for (std::uint32_t e = 0; e < ne(); ++e) {
    darts_at_[edge_end[e][0]].push_back(dir::fwd(e));
    darts_at_[edge_end[e][1]].push_back(dir::fwd(e) | 1u);
  }
  for (auto& ds : darts_at_) std::sort(ds.begin(), ds.end());

  corners_.clear();
  corners_at_.assign(nv(), {});
  square_corners_at_.assign(nv(), {});
  for (std::uint32_t s = 0; s < squares.size(); ++s) {
    for (std::uint8_t k = 0; k < 4; ++k) {
      std::uint32_t in = squares[s].side[k];
      std::uint32_t out = squares[s].side[(k + 1) % 4];
      // Corner at the shared vertex, spanned by the two darts pointing into
      // the square's boundary from it.
      Corner c;
      c.at = head(in);
      c.dart_a = dir::rev(in);
      c.dart_b = out;
      if (c.dart_a > c.dart_b) std::swap(c.dart_a, c.dart_b);
      c.square = s;
      c.pos = k;
      corners_.push_back(c);
      corners_at_[c.at].push_back(c);
      square_corners_at_[c.at].push_back({s, k});
    }
  }
}

bool SquareComplex::connected() const {
  if (nv() == 0) return true;
  std::vector<char> seen(nv(), 0);
  std::queue<VertexId> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::uint32_t d : darts_at_[v]) {
      VertexId w = head(d);
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == nv();
}

VertexId ComplexBuilder::add_vertex(const std::string& name) {
  x.vertex_name.push_back(name);
  return static_cast<VertexId>(x.vertex_name.size() - 1);
}

EdgeId ComplexBuilder::add_edge(const std::string& name, VertexId from, VertexId to) {
  x.edge_name.push_back(name);
  x.edge_end.push_back({from, to});
  return static_cast<EdgeId>(x.edge_end.size() - 1);
}

SquareId ComplexBuilder::add_square(const std::string& name, std::array<std::uint32_t, 4> sides) {
  x.square_name.push_back(name);
  x.squares.push_back({sides});
  return static_cast<SquareId>(x.squares.size() - 1);
}

SquareComplex ComplexBuilder::build() {
  x.finalize();
  return std::move(x);
}

Subcomplex Subcomplex::empty(const SquareComplex& x) {
  Subcomplex s;
  s.parent = &x;
  s.v_in.assign(x.nv(), 0);
  s.e_in.assign(x.ne(), 0);
  s.s_in.assign(x.ns(), 0);
  return s;
}

Subcomplex Subcomplex::full(const SquareComplex& x) {
  Subcomplex s;
  s.parent = &x;
  s.v_in.assign(x.nv(), 1);
  s.e_in.assign(x.ne(), 1);
  s.s_in.assign(x.ns(), 1);
  return s;
}

Subcomplex Subcomplex::span(const SquareComplex& x, const std::vector<VertexId>& vs,
                            const std::vector<EdgeId>& es, const std::vector<SquareId>& ss) {
  Subcomplex s = empty(x);
  for (VertexId v : vs) s.v_in[v] = 1;
  for (EdgeId e : es) s.e_in[e] = 1;
  for (SquareId q : ss) s.s_in[q] = 1;
  for (std::uint32_t q = 0; q < x.ns(); ++q)
    if (s.s_in[q])
      for (auto side : x.squares[q].side) s.e_in[side >> 1] = 1;
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (s.e_in[e]) {
      s.v_in[x.edge_end[e][0]] = 1;
      s.v_in[x.edge_end[e][1]] = 1;
    }
  return s;
}

Subcomplex Subcomplex::induced(const SquareComplex& x, const std::vector<char>& v_in) {
  Subcomplex s = empty(x);
  s.v_in = v_in;
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (v_in[x.edge_end[e][0]] && v_in[x.edge_end[e][1]]) s.e_in[e] = 1;
  for (std::uint32_t q = 0; q < x.ns(); ++q) {
    bool all = true;
    for (auto side : x.squares[q].side)
      if (!s.e_in[side >> 1]) all = false;
    if (all) s.s_in[q] = 1;
  }
  return s;
}

std::size_t Subcomplex::vertex_count() const {
  return static_cast<std::size_t>(std::count(v_in.begin(), v_in.end(), 1));
}
std::size_t Subcomplex::edge_count() const {
  return static_cast<std::size_t>(std::count(e_in.begin(), e_in.end(), 1));
}
std::size_t Subcomplex::square_count() const {
  return static_cast<std::size_t>(std::count(s_in.begin(), s_in.end(), 1));
}

std::vector<VertexId> Subcomplex::vertices() const {
  std::vector<VertexId> out;
  for (std::uint32_t v = 0; v < v_in.size(); ++v)
    if (v_in[v]) out.push_back(v);
  return out;
}

std::vector<EdgeId> Subcomplex::edges() const {
  std::vector<EdgeId> out;
  for (std::uint32_t e = 0; e < e_in.size(); ++e)
    if (e_in[e]) out.push_back(e);
  return out;
}

std::vector<SquareId> Subcomplex::square_list() const {
  std::vector<SquareId> out;
  for (std::uint32_t s = 0; s < s_in.size(); ++s)
    if (s_in[s]) out.push_back(s);
  return out;
}

bool Subcomplex::closed_under_incidence() const {
  const SquareComplex& x = *parent;
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (e_in[e] && (!v_in[x.edge_end[e][0]] || !v_in[x.edge_end[e][1]])) return false;
  for (std::uint32_t s = 0; s < x.ns(); ++s)
    if (s_in[s])
      for (auto side : x.squares[s].side)
        if (!e_in[side >> 1]) return false;
  return true;
}

bool Subcomplex::connected() const {
  const SquareComplex& x = *parent;
  VertexId start = kNone;
  std::size_t total = 0;
  for (std::uint32_t v = 0; v < v_in.size(); ++v)
    if (v_in[v]) {
      if (start == kNone) start = v;
      ++total;
    }
  if (total <= 1) return true;
  std::vector<char> seen(x.nv(), 0);
  std::queue<VertexId> q;
  q.push(start);
  seen[start] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::uint32_t d : x.darts_at(v)) {
      if (!e_in[d >> 1]) continue;
      VertexId w = x.head(d);
      if (v_in[w] && !seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == total;
}

SquareComplex Subcomplex::materialize(std::vector<VertexId>* v_new_of_old,
                                      std::vector<EdgeId>* e_new_of_old) const {
  const SquareComplex& x = *parent;
  ComplexBuilder b;
  std::vector<VertexId> vmap(x.nv(), kNone);
  std::vector<EdgeId> emap(x.ne(), kNone);
  for (std::uint32_t v = 0; v < x.nv(); ++v)
    if (v_in[v]) vmap[v] = b.add_vertex(x.vertex_name[v]);
  for (std::uint32_t e = 0; e < x.ne(); ++e)
    if (e_in[e]) emap[e] = b.add_edge(x.edge_name[e], vmap[x.edge_end[e][0]], vmap[x.edge_end[e][1]]);
  for (std::uint32_t s = 0; s < x.ns(); ++s)
    if (s_in[s]) {
      std::array<std::uint32_t, 4> sides;
      for (int k = 0; k < 4; ++k) {
        std::uint32_t c = x.squares[s].side[k];
        sides[k] = dir::make(emap[c >> 1], dir::forward(c));
      }
      b.add_square(x.square_name[s], sides);
    }
  if (v_new_of_old) *v_new_of_old = vmap;
  if (e_new_of_old) *e_new_of_old = emap;
  return b.build();
}

VertexId EdgePath::end(const SquareComplex& x) const {
  return steps.empty() ? start : x.head(steps.back());
}

bool EdgePath::is_closed(const SquareComplex& x) const { return end(x) == start; }

void EdgePath::validate(const SquareComplex& x) const {
  if (start >= x.nv()) throw StructuralError("path start is not a vertex");
  VertexId at = start;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::uint32_t c = steps[i];
    if ((c >> 1) >= x.ne()) throw StructuralError("path step references missing edge");
    if (x.tail(c) != at)
      throw StructuralError("path step " + std::to_string(i + 1) + " (" + x.dir_name(c) +
                            ") does not start at " + x.vertex_name[at]);
    at = x.head(c);
  }
}

EdgePath EdgePath::reversed(const SquareComplex& x) const {
  EdgePath r;
  r.start = end(x);
  r.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) r.steps.push_back(dir::rev(*it));
  return r;
}

EdgePath operator+(const EdgePath& a, const EdgePath& b) {
  EdgePath c;
  c.start = a.start;
  c.steps = a.steps;
  c.steps.insert(c.steps.end(), b.steps.begin(), b.steps.end());
  return c;
}

EdgePath free_reduce(const EdgePath& p) {
  EdgePath r;
  r.start = p.start;
  for (std::uint32_t c : p.steps) {
    if (!r.steps.empty() && r.steps.back() == dir::rev(c))
      r.steps.pop_back();
    else
      r.steps.push_back(c);
  }
  return r;
}

std::vector<VertexId> path_vertices(const SquareComplex& x, const EdgePath& p) {
  std::vector<VertexId> out;
  out.reserve(p.steps.size() + 1);
  out.push_back(p.start);
  for (std::uint32_t c : p.steps) out.push_back(x.head(c));
  return out;
}

}  // namespace cubical
