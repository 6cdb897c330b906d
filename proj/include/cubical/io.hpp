#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cubical/complex.hpp"
#include "cubical/maps.hpp"
#include "cubical/raag.hpp"
#include "cubical/structure.hpp"

namespace cubical {

// sqc format: "sqc 1" header, then "vertex NAME", "edge NAME FROM TO",
// "square NAME ±E1 ±E2 ±E3 ±E4". "#" starts a comment anywhere.
SquareComplex read_sqc(std::istream& in, const std::string& origin = "<stream>");
SquareComplex load_sqc(const std::string& path);
void write_sqc(std::ostream& out, const SquareComplex& x);
std::string sqc_string(const SquareComplex& x);
void save_sqc(const std::string& path, const SquareComplex& x);

// map format: "map 1", "from FILE", "to FILE", "v A -> B", "e A -> ±B".
struct MapFileData {
  std::string from_path, to_path;
  std::vector<std::pair<std::string, std::string>> v;
  std::vector<std::pair<std::string, std::string>> e;  // value carries an optional sign
};

MapFileData read_map_file(std::istream& in, const std::string& origin = "<stream>");
CombinatorialMap resolve_map(const MapFileData& data, const SquareComplex& from,
                             const SquareComplex& to);

// Owns the two complexes the map points between.
struct LoadedMap {
  std::unique_ptr<SquareComplex> from, to;
  CombinatorialMap map;
};

// Loads from/to relative to the map file's directory. Either side can be
// overridden by an already-loaded complex (matched by cell names).
LoadedMap load_map(const std::string& path);
CombinatorialMap load_map_onto(const std::string& path, const SquareComplex& to,
                               std::unique_ptr<SquareComplex>& from_out);
void write_map_file(std::ostream& out, const CombinatorialMap& m, const std::string& from_path,
                    const std::string& to_path);

// act format: "act 1", then "gen NAME: p0 p1 ... pk" per generator.
struct GroupAction {
  std::size_t npoints = 0;
  std::vector<std::string> names;
  std::vector<Perm> gens;
};

GroupAction read_act(std::istream& in, const std::string& origin = "<stream>");
void write_act(std::ostream& out, const GroupAction& a);

// gra format: "gra 1", then "gen NAME" and "com A B" lines.
raag::DefGraph read_gra(std::istream& in, const std::string& origin = "<stream>");
raag::DefGraph load_gra(const std::string& path);
void write_gra(std::ostream& out, const raag::DefGraph& g);

// Signed whitespace-separated names: "a b -a".
std::vector<std::pair<std::string, bool>> parse_signed_names(const std::string& text);
EdgePath path_from_names(const SquareComplex& x, VertexId start,
                         const std::vector<std::pair<std::string, bool>>& names);
std::string path_names(const SquareComplex& x, const EdgePath& p);

nlohmann::json structure_json(const SquareComplex& x, const StructureReport& r);
nlohmann::json action_json(const GroupAction& a);

// Presentation only: vertices, edges colored by hyperplane class.
std::string to_dot(const SquareComplex& x, const StructureReport* r);

}  // namespace cubical
