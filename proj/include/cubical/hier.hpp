#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/covers.hpp"
#include "cubical/maps.hpp"
#include "cubical/structure.hpp"

namespace cubical {

// A family of locally convex subcomplexes of a directly special complex,
// together with the bookkeeping for the hierarchy of imitators: one imitator
// per nonempty sequence of distinct family indices. The imitator indexed by
// (i0,...,im) wanders Y_{i0}; the singleton (i0) copies the walker and every
// longer sequence copies the moves of its tail (i1,...,im). Sequences with
// repeated indices move exactly like their rightmost-occurrence collapse, so
// the distinct ones carry the whole state.
struct HierSystem {
  const SquareComplex* x = nullptr;
  const StructureReport* rx = nullptr;
  std::vector<Subcomplex> ys;

  // Materialized family members with their inclusions into x.
  std::vector<std::shared_ptr<SquareComplex>> y_complex;
  std::vector<CombinatorialMap> y_inclusion;
  std::vector<std::vector<VertexId>> y_vertex_of_x;  // kNone off the member

  // Distinct-index sequences in length-lex order; entries are family indices.
  std::vector<std::vector<std::uint32_t>> seqs;
  // Position of the tail (i1,...,im) of each sequence; kNone for singletons.
  std::vector<std::uint32_t> suffix_of;

  std::size_t nseq() const { return seqs.size(); }
  std::uint32_t seq_index(const std::vector<std::uint32_t>& s) const;  // kNone if absent
  // The dart of member i at vertex v dual to wall h, or kNone when v lies off
  // the member or no such dart exists. Uniqueness is forced by the ambient
  // complex being directly special.
  std::uint32_t move_of(std::size_t i, VertexId v, HyperplaneId h) const;

 private:
  std::vector<std::uint32_t> move_;  // flattened [i][v][h] dart table
  std::size_t nh_ = 0;
  friend HierSystem hier_system(const SquareComplex&, const StructureReport&,
                                std::vector<Subcomplex>);
};

// Validates the hypotheses: x directly special; every member connected,
// locally convex, and non-inter-osculating with every wall of x.
HierSystem hier_system(const SquareComplex& x, const StructureReport& rx,
                       std::vector<Subcomplex> ys);

// Walker position plus one position per distinct-index sequence, stored as
// vertices of the ambient complex (theta[k] lies on member seqs[k][0]).
struct HierState {
  VertexId walker = kNone;
  std::vector<VertexId> theta;

  bool operator==(const HierState&) const = default;
};

// Everybody at base: the walker and all imitators.
HierState initial_state(const HierSystem& sys, VertexId base);

struct HierStep {
  HierState next;
  std::vector<std::uint32_t> moved;  // per sequence: dart traversed, or kNone
};

// One walker step: singletons copy the walker dart, longer sequences copy
// their tail's move from this same step, each crossing the unique dual dart
// of the copied wall at its own position when one exists.
HierStep hier_transition(const HierSystem& sys, const HierState& st, std::uint32_t walker_dart);

struct HierTranscript {
  HierState start;
  HierState end;
  std::vector<EdgePath> delta;  // per sequence: the imitator's path in x
};

// Runs the whole hierarchy along a walker path with every imitator starting
// at `from`, recording each imitator's path.
HierTranscript hier_run(const HierSystem& sys, const EdgePath& walker, VertexId from);

// Keeps the rightmost occurrence of each index: (1,2,2,4,1,4) -> (2,1,4).
std::vector<std::uint32_t> collapse_sequence(const std::vector<std::uint32_t>& seq);

// The path of a single imitator sequence, repeats allowed, computed by the
// recursive cascade: the sequence follows the path of its tail, the base case
// follows the walker. Agrees with hier_run on distinct-index sequences.
EdgePath hier_delta(const HierSystem& sys, const std::vector<std::uint32_t>& seq,
                    const EdgePath& walker, VertexId from);

// The cover of the hierarchy-stabilizer subgroup together with the based
// elevation of every family member and its image in the total complex.
struct HierCover {
  CoveringMap cover;
  std::vector<Elevation> elevation;
  std::vector<Subcomplex> image;  // on cover.total
};

// BFS over reachable hierarchy states from everybody-at-base. Verifies that
// every based elevation embeds, that the images of every nonempty subfamily
// intersect in a connected subcomplex, and that the covering is injective on
// the intersection of all of them; throws PropertyViolation otherwise.
HierCover hier_cover(const HierSystem& sys, VertexId base, Budgets budgets = {});

}  // namespace cubical
