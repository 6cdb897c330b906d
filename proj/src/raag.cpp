#include "cubical/raag.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "cubical/structure.hpp"

namespace cubical::raag {

std::uint32_t DefGraph::gen_id(const std::string& name) const {
  for (std::uint32_t g = 0; g < gen_names.size(); ++g)
    if (gen_names[g] == name) return g;
  throw ParseError("unknown generator: " + name);
}

DefGraph DefGraph::discrete(std::vector<std::string> names) {
  DefGraph g;
  g.gen_names = std::move(names);
  g.adj.assign(g.rank(), std::vector<char>(g.rank(), 0));
  return g;
}

DefGraph DefGraph::complete(std::vector<std::string> names) {
  DefGraph g = discrete(std::move(names));
  for (std::uint32_t a = 0; a < g.rank(); ++a)
    for (std::uint32_t b = a + 1; b < g.rank(); ++b) g.add_edge(a, b);
  return g;
}

void DefGraph::add_edge(std::uint32_t g, std::uint32_t h) {
  if (g == h) throw StructuralError("commutation graph cannot have loops");
  adj[g][h] = adj[h][g] = 1;
}

bool DefGraph::valid() const {
  for (std::uint32_t a = 0; a < rank(); ++a) {
    if (adj[a].size() != rank() || adj[a][a]) return false;
    for (std::uint32_t b = 0; b < rank(); ++b)
      if (adj[a][b] != adj[b][a]) return false;
  }
  return true;
}

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inv(*it));
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word power(const Word& w, int n) {
  Word base = n < 0 ? inverse_word(w) : w;
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
  return out;
}

Word parse_word(const DefGraph& g, const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    bool negative = false;
    if (tok[0] == '-' || tok[0] == '+') {
      negative = tok[0] == '-';
      tok = tok.substr(1);
    }
    if (tok.empty()) throw ParseError("bare sign in word");
    std::uint32_t id = g.gen_id(tok);
    w.push_back(negative ? neg(id) : pos(id));
  }
  return w;
}

std::string word_string(const DefGraph& g, const Word& w) {
  std::string out;
  for (Letter l : w) {
    if (!out.empty()) out += ' ';
    if (!positive(l)) out += '-';
    out += g.gen_names[gen(l)];
  }
  return out;
}

Word reduce(const DefGraph& g, const Word& w) {
  Word out;
  for (Letter l : w) {
    bool cancelled = false;
    for (std::size_t k = out.size(); k-- > 0;) {
      if (gen(out[k]) == gen(l)) {
        if (out[k] == inv(l)) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
          cancelled = true;
        }
        break;
      }
      if (!g.adjacent(gen(out[k]), gen(l))) break;
    }
    if (!cancelled) out.push_back(l);
  }
  return out;
}

bool is_reduced(const DefGraph& g, const Word& w) { return reduce(g, w) == w; }

Word canonical(const DefGraph& g, const Word& w0) {
  Word w = reduce(g, w0), out;
  out.reserve(w.size());
  while (!w.empty()) {
    std::size_t best = 0;
    bool found = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      bool movable = true;
      for (std::size_t j = 0; j < i && movable; ++j)
        movable = gen(w[j]) != gen(w[i]) && g.adjacent(gen(w[j]), gen(w[i]));
      if (movable && (!found || w[i] < w[best])) {
        best = i;
        found = true;
      }
    }
    out.push_back(w[best]);
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

namespace {

// All adjacent-transposition neighbors under commutation swaps.
std::vector<Word> swap_neighbors(const DefGraph& g, const Word& w) {
  std::vector<Word> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (gen(w[i]) == gen(w[i + 1]) || !g.adjacent(gen(w[i]), gen(w[i + 1]))) continue;
    Word n = w;
    std::swap(n[i], n[i + 1]);
    out.push_back(n);
  }
  return out;
}

std::set<Word> orbit(const DefGraph& g, const Word& start, bool with_rotations,
                     const Budgets& budgets, const Word* stop_at = nullptr) {
  std::set<Word> seen{start};
  std::queue<Word> q;
  q.push(start);
  while (!q.empty()) {
    Word w = q.front();
    q.pop();
    if (stop_at && w == *stop_at) return seen;
    std::vector<Word> next = swap_neighbors(g, w);
    if (with_rotations)
      for (std::size_t k = 1; k < w.size(); ++k) {
        Word r(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
        r.insert(r.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        next.push_back(r);
      }
    for (Word& n : next)
      if (seen.insert(n).second) {
        if (seen.size() > budgets.orbit)
          throw BudgetError("word orbit exceeds " + std::to_string(budgets.orbit) +
                            " elements");
        q.push(n);
      }
  }
  return seen;
}

// Strips one cyclic conjugating pair if any exists; the criterion is an
// inverse pair whose outer flanks are swap-movable out of the way.
bool strip_once(const DefGraph& g, Word& w, Word& conjugator) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool prefix_ok = true;
    for (std::size_t k = 0; k < i && prefix_ok; ++k)
      prefix_ok = gen(w[k]) != gen(w[i]) && g.adjacent(gen(w[k]), gen(w[i]));
    if (!prefix_ok) continue;
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[j] != inv(w[i])) continue;
      bool suffix_ok = true;
      for (std::size_t k = j + 1; k < w.size() && suffix_ok; ++k)
        suffix_ok = gen(w[k]) != gen(w[j]) && g.adjacent(gen(w[k]), gen(w[j]));
      if (!suffix_ok) continue;
      conjugator.push_back(w[i]);
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
      w = reduce(g, w);
      return true;
    }
  }
  return false;
}

Word cyc_core(const DefGraph& g, const Word& w0, Word& conjugator) {
  Word w = reduce(g, w0);
  while (strip_once(g, w, conjugator)) {
  }
  return w;
}

}  // namespace

Word canonical_by_orbit(const DefGraph& g, const Word& w, const Budgets& budgets) {
  Word r = reduce(g, w);
  if (r.empty()) return r;
  auto all = orbit(g, r, false, budgets);
  return *all.begin();
}

bool words_equal(const DefGraph& g, const Word& a, const Word& b) {
  return reduce(g, concat(a, inverse_word(b))).empty();
}

bool word_trivial(const DefGraph& g, const Word& w) { return reduce(g, w).empty(); }

CycReduced cyc_reduce(const DefGraph& g, const Word& w, const Budgets& budgets) {
  CycReduced out;
  out.core = cyc_core(g, w, out.conjugator);
  if (out.core.empty())
    out.canonical_cyclic = {};
  else
    out.canonical_cyclic = *orbit(g, out.core, true, budgets).begin();
  return out;
}

bool conjugate(const DefGraph& g, const Word& a, const Word& b, const Budgets& budgets) {
  Word ca, cb;
  Word core_a = cyc_core(g, a, ca), core_b = cyc_core(g, b, cb);
  if (core_a.size() != core_b.size()) return false;
  if (core_a.empty()) return true;
  auto seen = orbit(g, core_a, true, budgets, &core_b);
  return seen.count(core_b) != 0;
}

IndependenceResult independence_test(const DefGraph& g, const std::vector<Word>& words,
                                     const Budgets& budgets) {
  std::vector<Word> cores(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    Word c;
    cores[i] = cyc_core(g, words[i], c);
    if (cores[i].empty()) throw StructuralError("independence test requires nontrivial words");
  }
  IndependenceResult res;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      auto li = static_cast<std::uint64_t>(cores[i].size());
      auto lj = static_cast<std::uint64_t>(cores[j].size());
      std::uint64_t l = lcm_u64(li, lj);
      int m = static_cast<int>(l / li), n = static_cast<int>(l / lj);
      Word pi = power(cores[i], m);
      if (conjugate(g, pi, power(cores[j], n), budgets)) {
        res = {false, i, j, m, n};
        return res;
      }
      if (conjugate(g, pi, power(cores[j], -n), budgets)) {
        res = {false, i, j, m, -n};
        return res;
      }
    }
  res.independent = true;
  return res;
}

ConvexityResult convexity_test(const DefGraph& g, const Word& w, const Budgets& budgets) {
  (void)budgets;
  Word c;
  Word core = cyc_core(g, w, c);
  if (core.empty()) throw StructuralError("convexity test requires a nontrivial word");
  ConvexityResult res;
  std::set<std::uint32_t> sup;
  for (Letter l : core) sup.insert(gen(l));
  res.support.assign(sup.begin(), sup.end());

  // Components of the complement graph on the support.
  std::map<std::uint32_t, int> comp;
  int ncomp = 0;
  for (std::uint32_t s : res.support) {
    if (comp.count(s)) continue;
    std::queue<std::uint32_t> q;
    q.push(s);
    comp[s] = ncomp;
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop();
      for (std::uint32_t v : res.support)
        if (v != u && !g.adjacent(u, v) && !comp.count(v)) {
          comp[v] = ncomp;
          q.push(v);
        }
    }
    ++ncomp;
  }
  res.convex = ncomp <= 1;
  if (!res.convex)
    for (std::uint32_t s : res.support)
      (comp[s] == 0 ? res.join_left : res.join_right).push_back(s);
  return res;
}

CommandConditions command_conditions(const DefGraph& g, const std::vector<Word>& words) {
  CommandConditions out;
  out.pi.assign(g.rank(), std::vector<long long>(words.size(), 0));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (Letter l : words[i]) out.pi[gen(l)][i] += positive(l) ? 1 : -1;

  out.condition1 = true;
  for (std::uint32_t v = 0; v < g.rank() && out.condition1; ++v)
    for (std::size_t i = 0; i < words.size(); ++i)
      if (out.pi[v][i] == 0) {
        out.condition1 = false;
        out.witness = "exponent sum of " + g.gen_names[v] + " in word " + std::to_string(i) +
                      " is zero";
        break;
      }
  out.condition2 = true;
  for (std::uint32_t v = 0; v < g.rank() && out.condition2; ++v)
    for (std::uint32_t u = v + 1; u < g.rank() && out.condition2; ++u)
      for (std::size_t i = 0; i < words.size() && out.condition2; ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
          if (out.pi[v][i] * out.pi[u][j] == out.pi[v][j] * out.pi[u][i]) {
            out.condition2 = false;
            out.witness = "words " + std::to_string(i) + ", " + std::to_string(j) +
                          " have equal " + g.gen_names[v] + "/" + g.gen_names[u] +
                          " exponent ratios";
            break;
          }

  // A nontrivial join factor of the whole graph, when one exists: a
  // complement component of size at least two.
  std::vector<int> comp(g.rank(), -1);
  int ncomp = 0;
  for (std::uint32_t s = 0; s < g.rank(); ++s) {
    if (comp[s] >= 0) continue;
    std::queue<std::uint32_t> q;
    q.push(s);
    comp[s] = ncomp;
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop();
      for (std::uint32_t v = 0; v < g.rank(); ++v)
        if (v != u && !g.adjacent(u, v) && comp[v] < 0) {
          comp[v] = ncomp;
          q.push(v);
        }
    }
    ++ncomp;
  }
  for (int c = 0; c < ncomp && out.join_factor.empty(); ++c) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < g.rank(); ++v)
      if (comp[v] == c) members.push_back(v);
    if (members.size() >= 2 && members.size() < g.rank()) out.join_factor = members;
  }
  if (!out.join_factor.empty())
    for (const Word& w : words) {
      Word p;
      for (Letter l : w)
        if (std::find(out.join_factor.begin(), out.join_factor.end(), gen(l)) !=
            out.join_factor.end())
          p.push_back(l);
      out.projected.push_back(reduce(g, p));
    }
  return out;
}

SquareComplex salvetti(const DefGraph& g) {
  ComplexBuilder b;
  VertexId x = b.add_vertex("x");
  std::vector<EdgeId> loop(g.rank());
  for (std::uint32_t v = 0; v < g.rank(); ++v) loop[v] = b.add_edge(g.gen_names[v], x, x);
  for (std::uint32_t v = 0; v < g.rank(); ++v)
    for (std::uint32_t u = v + 1; u < g.rank(); ++u)
      if (g.adjacent(v, u))
        b.add_square("[" + g.gen_names[v] + "," + g.gen_names[u] + "]",
                     {dir::fwd(loop[v]), dir::fwd(loop[u]), dir::make(loop[v], false),
                      dir::make(loop[u], false)});
  return b.build();
}

}  // namespace cubical::raag

namespace cubical {

raag::DefGraph crossing_graph(const SquareComplex& x, const StructureReport& r) {
  std::vector<std::string> names;
  names.reserve(r.hyperplanes.size());
  for (const Hyperplane& h : r.hyperplanes) names.push_back(x.edge_name[h.edges[0]]);
  raag::DefGraph g = raag::DefGraph::discrete(std::move(names));
  for (const OsculationEvent& ev : r.events)
    if (ev.kind == EventKind::kIntersect) g.add_edge(ev.h1, ev.h2);
  return g;
}

}  // namespace cubical
