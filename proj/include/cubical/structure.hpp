#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubical/complex.hpp"

namespace cubical {

enum class EventKind : std::uint8_t {
  kIntersect,
  kOsculate,
  kSelfIntersect,
  kSelfOsculate,
  kLoopSelfOsculate,
};

const char* to_string(EventKind k);

// Classification of one unordered dart pair at a vertex. For
// kLoopSelfOsculate the darts are the two ends of one loop edge and the
// witness is presented as (x; edge).
struct OsculationEvent {
  EventKind kind;
  VertexId at;
  std::uint32_t dart1, dart2;  // dart1 < dart2
  HyperplaneId h1, h2;         // h1 <= h2

  bool operator==(const OsculationEvent& o) const {
    return kind == o.kind && at == o.at && dart1 == o.dart1 && dart2 == o.dart2 && h1 == o.h1 &&
           h2 == o.h2;
  }
};

// Chain of elementary parallelisms carrying a directed edge to its own
// reverse; certifies one-sidedness. dirs has one more entry than via:
// via[i] carries dirs[i] to dirs[i+1] as opposite sides.
struct FlipWitness {
  std::vector<std::uint32_t> dirs;
  std::vector<SquareId> via;
};

struct Hyperplane {
  HyperplaneId id = kNone;
  std::vector<EdgeId> edges;  // sorted
  bool two_sided = false;
  FlipWitness flip;  // only for one-sided
};

struct LinkViolation {
  VertexId at;
  bool loop;  // dart paired with itself; otherwise a doubled link edge
  std::uint32_t dart1, dart2;
  SquareId square1, square2;  // square2 = kNone for a loop
};

struct StructureReport {
  std::vector<Hyperplane> hyperplanes;
  std::vector<HyperplaneId> hyperplane_of_edge;
  // +1/-1 on member darts of two-sided hyperplanes: the side of the
  // hyperplane the dart's head lies on; 0 where undefined.
  std::vector<std::int8_t> side_of_dir;
  std::vector<char> link_simple;  // per vertex
  std::vector<LinkViolation> link_violations;
  bool npc = false;
  std::vector<OsculationEvent> events;
  std::vector<EdgeId> loop_edges;
  bool directly_special = false;
  std::vector<std::string> failures;

  bool pair_intersects(HyperplaneId a, HyperplaneId b) const;
  bool pair_osculates(HyperplaneId a, HyperplaneId b) const;
  std::vector<std::pair<HyperplaneId, HyperplaneId>> inter_osculating_pairs() const;
  // Crossing direction of a dart: +1 with the co-orientation, -1 against.
  int crossing_sign(std::uint32_t dart) const { return side_of_dir[dart]; }
};

// Full structural analysis. Hyperplane ids are canonical: classes ordered
// by smallest member edge. Events are ordered by (vertex, dart1, dart2).
// Event classification is parallelized over vertices when OpenMP is
// enabled; output is identical for any thread count.
StructureReport analyze(const SquareComplex& x);

// Independent serial implementation used as a cross-check and benchmark
// baseline: fixpoint label propagation instead of union-find, BFS
// 2-coloring for sidedness, naive corner scans.
StructureReport analyze_reference(const SquareComplex& x);

// Verdict-level agreement (partition, sidedness, links, events, verdict).
bool same_verdicts(const StructureReport& a, const StructureReport& b);

void require_directly_special(const SquareComplex& x, const StructureReport& r,
                              const std::string& role);

}  // namespace cubical
