#include "cubical/oracle.hpp"

#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace cubical {

namespace {

void require_closed(const SquareComplex& x, const EdgePath& loop) {
  loop.validate(x);
  if (!loop.is_closed(x)) {
    throw StructuralError("triviality is asked of a non-closed path (" +
                          x.vertex_name[loop.start] + " to " + x.vertex_name[loop.end(x)] + ")");
  }
}

}  // namespace

RaagWordOracle::RaagWordOracle(const SquareComplex& x, const StructureReport& r)
    : x_(&x), r_(&r) {
  require_directly_special(x, r, "crossing-word oracle");
  graph_ = crossing_graph(x, r);
}

raag::Word RaagWordOracle::crossing_word(const EdgePath& p) const {
  p.validate(*x_);
  raag::Word w;
  w.reserve(p.steps.size());
  for (std::uint32_t c : p.steps) {
    HyperplaneId h = r_->hyperplane_of_edge[dir::edge(c)];
    w.push_back(r_->crossing_sign(c) > 0 ? raag::pos(h) : raag::neg(h));
  }
  return w;
}

bool RaagWordOracle::trivial(const EdgePath& loop) const {
  require_closed(*x_, loop);
  return raag::word_trivial(graph_, crossing_word(loop));
}

std::string RaagWordOracle::canonical_key(const EdgePath& p) const {
  p.validate(*x_);
  return x_->vertex_name[p.start] + "|" + x_->vertex_name[p.end(*x_)] + "|" +
         raag::word_string(graph_, raag::canonical(graph_, crossing_word(p)));
}

FreeReductionOracle::FreeReductionOracle(const SquareComplex& x) : x_(&x) {
  if (x.ns() != 0) {
    throw StructuralError("free-reduction oracle requires a square-free complex");
  }
}

bool FreeReductionOracle::trivial(const EdgePath& loop) const {
  require_closed(*x_, loop);
  return free_reduce(loop).steps.empty();
}

std::string FreeReductionOracle::canonical_key(const EdgePath& p) const {
  p.validate(*x_);
  EdgePath r = free_reduce(p);
  std::string key = x_->vertex_name[p.start] + "|";
  for (std::uint32_t c : r.steps) key += " " + x_->dir_name(c);
  return key;
}

AbelianCrossingOracle::AbelianCrossingOracle(const SquareComplex& x, const StructureReport& r)
    : x_(&x), r_(&r) {
  for (const Hyperplane& h : r.hyperplanes) {
    if (!h.two_sided) {
      throw StructuralError("abelian crossing oracle requires two-sided hyperplanes");
    }
  }
}

std::vector<long long> AbelianCrossingOracle::crossing_counts(const EdgePath& p) const {
  p.validate(*x_);
  std::vector<long long> counts(r_->hyperplanes.size(), 0);
  for (std::uint32_t c : p.steps) {
    counts[r_->hyperplane_of_edge[dir::edge(c)]] += r_->crossing_sign(c);
  }
  return counts;
}

bool AbelianCrossingOracle::trivial(const EdgePath& loop) const {
  require_closed(*x_, loop);
  for (long long n : crossing_counts(loop)) {
    if (n != 0) return false;
  }
  return true;
}

std::string AbelianCrossingOracle::canonical_key(const EdgePath& p) const {
  std::ostringstream out;
  out << x_->vertex_name[p.start] << "|" << x_->vertex_name[p.end(*x_)] << "|";
  for (long long n : crossing_counts(p)) out << n << ",";
  return out.str();
}

HomotopyBfsOracle::HomotopyBfsOracle(const SquareComplex& x, std::size_t max_len, Budgets budgets)
    : x_(&x), max_len_(max_len), budgets_(budgets) {}

bool HomotopyBfsOracle::trivial(const EdgePath& loop) const {
  require_closed(*x_, loop);
  EdgePath base = free_reduce(loop);
  if (base.steps.empty()) return true;

  // Both boundary orientations of every square, so each exchange is
  // reversible within the move set.
  std::vector<std::array<std::uint32_t, 4>> cycles;
  for (const Square& s : x_->squares) {
    cycles.push_back(s.side);
    cycles.push_back({dir::rev(s.side[3]), dir::rev(s.side[2]), dir::rev(s.side[1]),
                      dir::rev(s.side[0])});
  }

  // Shortest-first: backtrack insertions grow paths, so longer states wait
  // until every shorter avenue is exhausted.
  std::set<std::vector<std::uint32_t>> seen;
  std::map<std::size_t, std::deque<std::vector<std::uint32_t>>> queue;
  bool found = false;
  auto push = [&](std::vector<std::uint32_t> steps) {
    EdgePath p{base.start, std::move(steps)};
    p = free_reduce(p);
    if (p.steps.empty()) {
      found = true;
      return;
    }
    if (p.steps.size() > max_len_) return;
    if (seen.size() >= budgets_.orbit) {
      throw BudgetError("homotopy search exceeded " + std::to_string(budgets_.orbit) +
                        " states");
    }
    if (seen.insert(p.steps).second) queue[p.steps.size()].push_back(p.steps);
  };

  push(base.steps);
  while (!queue.empty() && !found) {
    auto bucket = queue.begin();
    std::vector<std::uint32_t> cur = bucket->second.front();
    bucket->second.pop_front();
    if (bucket->second.empty()) queue.erase(bucket);
    // Square exchanges: two consecutive boundary sides for the other two.
    for (std::size_t i = 0; i + 1 < cur.size() && !found; ++i) {
      for (const auto& cy : cycles) {
        for (int k = 0; k < 4; ++k) {
          if (cur[i] == cy[k] && cur[i + 1] == cy[(k + 1) % 4]) {
            std::vector<std::uint32_t> next = cur;
            next[i] = dir::rev(cy[(k + 3) % 4]);
            next[i + 1] = dir::rev(cy[(k + 2) % 4]);
            push(std::move(next));
            if (found) break;
          }
        }
        if (found) break;
      }
    }
    // Backtrack insertions at every position, at any dart leaving the
    // vertex there.
    EdgePath cur_path{base.start, cur};
    std::vector<VertexId> at = path_vertices(*x_, cur_path);
    for (std::size_t i = 0; i <= cur.size() && !found; ++i) {
      for (std::uint32_t d : x_->darts_at(at[i])) {
        std::vector<std::uint32_t> next;
        next.reserve(cur.size() + 2);
        next.insert(next.end(), cur.begin(), cur.begin() + i);
        next.push_back(d);
        next.push_back(dir::rev(d));
        next.insert(next.end(), cur.begin() + i, cur.end());
        push(std::move(next));
        if (found) break;
      }
    }
  }
  if (found) return true;
  throw BudgetError("homotopy search exhausted paths of length at most " +
                    std::to_string(max_len_) + " without finding a contraction");
}

std::string HomotopyBfsOracle::canonical_key(const EdgePath&) const {
  throw StructuralError("the homotopy search oracle does not define canonical keys");
}

}  // namespace cubical
