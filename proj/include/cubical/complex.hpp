#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubical/base.hpp"

namespace cubical {

// A square as the closed 4-cycle of its directed boundary traversals:
// head(side[i]) == tail(side[(i+1)%4]).
struct Square {
  std::array<std::uint32_t, 4> side;
};

// A square corner: two darts meeting at a vertex as consecutive boundary
// traversals. Darts are normalized so dart_a <= dart_b.
struct Corner {
  VertexId at;
  std::uint32_t dart_a, dart_b;
  SquareId square;
  std::uint8_t pos;  // boundary position producing this corner
};

// Square 2-skeleton of an NPC cube complex under implicit flag completion.
// Loop edges and multi-edges are legal; checks report on them instead of
// refusing to load.
struct SquareComplex {
  std::vector<std::string> vertex_name;
  std::vector<std::array<VertexId, 2>> edge_end;
  std::vector<std::string> edge_name;
  std::vector<Square> squares;
  std::vector<std::string> square_name;

  std::size_t nv() const { return vertex_name.size(); }
  std::size_t ne() const { return edge_end.size(); }
  std::size_t ns() const { return squares.size(); }

  VertexId tail(std::uint32_t code) const { return edge_end[code >> 1][code & 1u]; }
  VertexId head(std::uint32_t code) const { return edge_end[code >> 1][1u ^ (code & 1u)]; }
  // The vertex a dart is incident at (same formula as tail).
  VertexId dart_vertex(std::uint32_t dart) const { return tail(dart); }

  bool is_loop(EdgeId e) const { return edge_end[e][0] == edge_end[e][1]; }

  const std::vector<std::uint32_t>& darts_at(VertexId v) const { return darts_at_[v]; }
  const std::vector<Corner>& corners_at(VertexId v) const { return corners_at_[v]; }
  const std::vector<Corner>& all_corners() const { return corners_; }
  // Squares incident to a vertex, one entry per corner position.
  const std::vector<std::pair<SquareId, std::uint8_t>>& square_corners_at(VertexId v) const {
    return square_corners_at_[v];
  }

  bool is_corner_pair(VertexId v, std::uint32_t dart_a, std::uint32_t dart_b) const;

  VertexId vertex_id(const std::string& name) const;
  EdgeId edge_id(const std::string& name) const;
  SquareId square_id(const std::string& name) const;
  std::optional<VertexId> try_vertex_id(const std::string& name) const;
  std::optional<EdgeId> try_edge_id(const std::string& name) const;

  // Human-readable directed-edge spelling: NAME or -NAME.
  std::string dir_name(std::uint32_t code) const;

  // Validates the structure and builds derived tables. Throws
  // StructuralError naming the offending cell.
  void finalize();

  bool connected() const;

 private:
  std::vector<std::vector<std::uint32_t>> darts_at_;
  std::vector<Corner> corners_;
  std::vector<std::vector<Corner>> corners_at_;
  std::vector<std::vector<std::pair<SquareId, std::uint8_t>>> square_corners_at_;
  std::map<std::string, VertexId> vertex_by_name_;
  std::map<std::string, EdgeId> edge_by_name_;
  std::map<std::string, SquareId> square_by_name_;
};

// Incrementally assembles a complex; finalize() validates.
struct ComplexBuilder {
  SquareComplex x;
  VertexId add_vertex(const std::string& name);
  EdgeId add_edge(const std::string& name, VertexId from, VertexId to);
  // Sides as directed edge codes; chaining is validated at finalize.
  SquareId add_square(const std::string& name, std::array<std::uint32_t, 4> sides);
  SquareComplex build();
};

// Subcomplex closed under incidence, as bitmaps over the parent's cells.
struct Subcomplex {
  const SquareComplex* parent = nullptr;
  std::vector<char> v_in, e_in, s_in;

  static Subcomplex empty(const SquareComplex& x);
  static Subcomplex full(const SquareComplex& x);
  // Closure of the given cells under incidence.
  static Subcomplex span(const SquareComplex& x, const std::vector<VertexId>& vs,
                         const std::vector<EdgeId>& es, const std::vector<SquareId>& ss);
  // Full subcomplex on a vertex set: all edges and squares whose cells lie inside.
  static Subcomplex induced(const SquareComplex& x, const std::vector<char>& v_in);

  bool has_vertex(VertexId v) const { return v_in[v] != 0; }
  bool has_edge(EdgeId e) const { return e_in[e] != 0; }
  bool has_square(SquareId s) const { return s_in[s] != 0; }
  std::size_t vertex_count() const;
  std::size_t edge_count() const;
  std::size_t square_count() const;
  std::vector<VertexId> vertices() const;
  std::vector<EdgeId> edges() const;
  std::vector<SquareId> square_list() const;

  bool closed_under_incidence() const;
  bool connected() const;
  bool operator==(const Subcomplex& o) const {
    return v_in == o.v_in && e_in == o.e_in && s_in == o.s_in;
  }

  // Materializes the subcomplex as its own SquareComplex, keeping cell names.
  // Returns the new complex plus id translations from parent ids.
  SquareComplex materialize(std::vector<VertexId>* v_new_of_old = nullptr,
                            std::vector<EdgeId>* e_new_of_old = nullptr) const;
};

// Edge path: start vertex plus directed edge codes, consecutively chained.
struct EdgePath {
  VertexId start = kNone;
  std::vector<std::uint32_t> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  VertexId end(const SquareComplex& x) const;
  bool is_closed(const SquareComplex& x) const;
  void validate(const SquareComplex& x) const;  // throws StructuralError
  EdgePath reversed(const SquareComplex& x) const;

  friend EdgePath operator+(const EdgePath& a, const EdgePath& b);
};

// Cancels adjacent backtracks (d followed by its reverse) to a fixpoint.
EdgePath free_reduce(const EdgePath& p);

// All vertices visited, in order (|steps|+1 entries).
std::vector<VertexId> path_vertices(const SquareComplex& x, const EdgePath& p);

}  // namespace cubical
