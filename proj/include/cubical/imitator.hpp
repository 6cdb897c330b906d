#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cubical/complex.hpp"
#include "cubical/covers.hpp"
#include "cubical/maps.hpp"
#include "cubical/structure.hpp"

namespace cubical {

// A based local isometry into a directly special complex, with the
// codomain's structural analysis.
struct ImitatorContext {
  const CombinatorialMap* phi = nullptr;  // Y -> X
  const StructureReport* rx = nullptr;    // structure of X
};

void require_imitator_context(const ImitatorContext& ctx);

// The unique dart f in the link of y whose image is dual to the same wall
// as the walker's dart, or kNone when none exists. Two candidates mean the
// wall self-osculates at the image or the map is not locally injective;
// that throws PropertyViolation.
std::uint32_t imitator_move(const ImitatorContext& ctx, VertexId y, std::uint32_t walker_dart);

struct ImitatorStep {
  std::uint32_t walker_dart;
  std::uint32_t imitator_dart = kNone;  // kNone = stayed put
};

struct ImitatorTranscript {
  VertexId y_start = kNone;
  std::vector<ImitatorStep> steps;
  EdgePath walker;    // the input path
  EdgePath imitator;  // the moves only; at most as long as the walker path
  VertexId y_end = kNone;

  // One line per step: `step K: walker ±E, imitator ±F|stay`.
  std::string to_text(const SquareComplex& y, const SquareComplex& x) const;
};

// Runs the simulation: the walker traverses the path while the imitator
// copies every move it can see. The walker may start anywhere; y is any
// vertex of the domain.
ImitatorTranscript imitate(const ImitatorContext& ctx, const EdgePath& walker, VertexId y);

// Right action of the fundamental group of X at phi(y) on the domain's
// vertices, with the stabilizer of y on its orbit.
struct ImitatorAction {
  GroupAction on_vertices;      // permutations of all domain vertices
  SubgroupRep stabilizer;       // of y; point i of its action is orbit[i]
  std::vector<VertexId> orbit;  // orbit of y, orbit[0] == y
};

ImitatorAction imitator_action(const ImitatorContext& ctx, VertexId y);

// The imitator path of a stabilizer loop, as a based loop at y. Throws
// StructuralError when the loop moves y.
EdgePath rho(const ImitatorContext& ctx, VertexId y, const EdgePath& loop);

// Cellular map that may collapse edges to vertices (retractions do).
struct CollapsingMap {
  const SquareComplex* domain = nullptr;
  const SquareComplex* codomain = nullptr;
  std::vector<VertexId> v_img;
  std::vector<std::uint32_t> e_img;  // directed code of each edge's forward image, or kNone

  std::uint32_t apply_dir(std::uint32_t c) const {
    std::uint32_t e = e_img[c >> 1];
    return e == kNone ? kNone : e ^ (c & 1u);
  }
  // Image path with collapsed steps dropped.
  EdgePath apply_path(const EdgePath& p) const;
};

// The completion of a local isometry: one vertex per (domain vertex,
// codomain vertex) pair, one edge per (codomain edge, imitator position at
// its tail), squares closed by the homotopy invariance of the imitator.
// Vertices are named (y,x), edges e(E;y,x).
struct Completion {
  std::shared_ptr<SquareComplex> total;
  CombinatorialMap covering;   // total -> X, degree |Y^0|
  CollapsingMap retraction;    // total -> Y
  CombinatorialMap embedding;  // Y -> total, y -> (y, phi(y))
  std::vector<std::uint32_t> component_of_vertex;
  std::size_t components = 0;

  VertexId pair_vertex(VertexId y, VertexId x) const;
};

Completion canonical_completion(const ImitatorContext& ctx);

// The component of the completion through (y, phi(y)): a based cover of X
// whose subgroup is the imitator stabilizer, carrying the restricted
// retraction and embedding.
struct ImitatorCover {
  CoveringMap cover;           // over X, based at the image of y
  CollapsingMap retraction;    // cover.total -> Y
  CombinatorialMap embedding;  // Y -> cover.total
};

ImitatorCover imitator_cover(const ImitatorContext& ctx, VertexId y);

// A regular cover of X in which every elevation of every input is embedded
// and inter-osculates with no wall: completion covers, refined, then closed
// up to a regular cover. Verification failures throw PropertyViolation.
struct EmbedAllInput {
  const CombinatorialMap* phi = nullptr;
  VertexId y_base = kNone;
};

struct EmbedAllResult {
  CoveringMap cover;  // regular and directly special, based over `base`
  std::vector<std::vector<Elevation>> elevations;  // per input
};

EmbedAllResult embed_all(const SquareComplex& x, const StructureReport& rx,
                         const std::vector<EmbedAllInput>& inputs, VertexId base,
                         Budgets budgets = {});

}  // namespace cubical
