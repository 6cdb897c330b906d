#include "cubical/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace cubical {

namespace {

// Lines with comments stripped and blanks skipped, tokenized.
std::vector<std::vector<std::string>> token_lines(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

void expect_header(const std::vector<std::vector<std::string>>& lines, const std::string& kind,
                   const std::string& origin) {
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != kind || lines[0][1] != "1")
    throw ParseError(origin + ": expected '" + kind + " 1' header");
}

std::pair<std::string, bool> split_sign(const std::string& tok) {
  if (tok.empty()) return {tok, true};
  if (tok[0] == '-') return {tok.substr(1), false};
  if (tok[0] == '+') return {tok.substr(1), true};
  return {tok, true};
}

std::string signed_name(const std::string& name, bool forward) {
  return forward ? name : "-" + name;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  return f;
}

}  // namespace

SquareComplex read_sqc(std::istream& in, const std::string& origin) {
  auto lines = token_lines(in);
  expect_header(lines, "sqc", origin);
  ComplexBuilder b;
  std::map<std::string, VertexId> vid;
  std::map<std::string, EdgeId> eid;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t[0] == "vertex" && t.size() == 2) {
      vid[t[1]] = b.add_vertex(t[1]);
    } else if (t[0] == "edge" && t.size() == 4) {
      if (!vid.count(t[2]) || !vid.count(t[3]))
        throw ParseError(origin + ": edge " + t[1] + " references unknown vertex");
      eid[t[1]] = b.add_edge(t[1], vid[t[2]], vid[t[3]]);
    } else if (t[0] == "square" && t.size() == 6) {
      std::array<std::uint32_t, 4> sides;
      for (int k = 0; k < 4; ++k) {
        auto [name, fwd] = split_sign(t[2 + k]);
        if (!eid.count(name))
          throw ParseError(origin + ": square " + t[1] + " references unknown edge " + name);
        sides[k] = dir::make(eid[name], fwd);
      }
      b.add_square(t[1], sides);
    } else {
      throw ParseError(origin + ": unrecognized line starting '" + t[0] + "'");
    }
  }
  try {
    return b.build();
  } catch (const StructuralError& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

SquareComplex load_sqc(const std::string& path) {
  auto f = open_file(path);
  return read_sqc(f, path);
}

void write_sqc(std::ostream& out, const SquareComplex& x) {
  out << "sqc 1\n";
  for (const auto& n : x.vertex_name) out << "vertex " << n << "\n";
  for (EdgeId e = 0; e < x.ne(); ++e)
    out << "edge " << x.edge_name[e] << " " << x.vertex_name[x.edge_end[e][0]] << " "
        << x.vertex_name[x.edge_end[e][1]] << "\n";
  for (SquareId s = 0; s < x.ns(); ++s) {
    out << "square " << x.square_name[s];
    for (auto side : x.squares[s].side)
      out << " " << signed_name(x.edge_name[side >> 1], dir::forward(side));
    out << "\n";
  }
}

std::string sqc_string(const SquareComplex& x) {
  std::ostringstream s;
  write_sqc(s, x);
  return s.str();
}

void save_sqc(const std::string& path, const SquareComplex& x) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  write_sqc(f, x);
}

MapFileData read_map_file(std::istream& in, const std::string& origin) {
  auto lines = token_lines(in);
  expect_header(lines, "map", origin);
  MapFileData d;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t[0] == "from" && t.size() == 2)
      d.from_path = t[1];
    else if (t[0] == "to" && t.size() == 2)
      d.to_path = t[1];
    else if (t[0] == "v" && t.size() == 4 && t[2] == "->")
      d.v.push_back({t[1], t[3]});
    else if (t[0] == "e" && t.size() == 4 && t[2] == "->")
      d.e.push_back({t[1], t[3]});
    else
      throw ParseError(origin + ": unrecognized line starting '" + t[0] + "'");
  }
  return d;
}

CombinatorialMap resolve_map(const MapFileData& data, const SquareComplex& from,
                             const SquareComplex& to) {
  CombinatorialMap m;
  m.domain = &from;
  m.codomain = &to;
  m.v_img.assign(from.nv(), kNone);
  m.e_img.assign(from.ne(), kNone);
  for (const auto& [a, b] : data.v) m.v_img[from.vertex_id(a)] = to.vertex_id(b);
  for (const auto& [a, b] : data.e) {
    auto [name, fwd] = split_sign(b);
    m.e_img[from.edge_id(a)] = dir::make(to.edge_id(name), fwd);
  }
  for (VertexId v = 0; v < from.nv(); ++v)
    if (m.v_img[v] == kNone) throw ParseError("map misses vertex " + from.vertex_name[v]);
  for (EdgeId e = 0; e < from.ne(); ++e)
    if (m.e_img[e] == kNone) throw ParseError("map misses edge " + from.edge_name[e]);
  m.validate();
  return m;
}

namespace {
std::string sibling(const std::string& anchor, const std::string& rel) {
  namespace fs = std::filesystem;
  fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(anchor).parent_path() / p).string();
}
}  // namespace

LoadedMap load_map(const std::string& path) {
  auto f = open_file(path);
  MapFileData d = read_map_file(f, path);
  if (d.from_path.empty() || d.to_path.empty())
    throw ParseError(path + ": map needs 'from' and 'to' lines");
  LoadedMap lm;
  lm.from = std::make_unique<SquareComplex>(load_sqc(sibling(path, d.from_path)));
  lm.to = std::make_unique<SquareComplex>(load_sqc(sibling(path, d.to_path)));
  lm.map = resolve_map(d, *lm.from, *lm.to);
  return lm;
}

CombinatorialMap load_map_onto(const std::string& path, const SquareComplex& to,
                               std::unique_ptr<SquareComplex>& from_out) {
  auto f = open_file(path);
  MapFileData d = read_map_file(f, path);
  if (d.from_path.empty()) throw ParseError(path + ": map needs a 'from' line");
  from_out = std::make_unique<SquareComplex>(load_sqc(sibling(path, d.from_path)));
  return resolve_map(d, *from_out, to);
}

void write_map_file(std::ostream& out, const CombinatorialMap& m, const std::string& from_path,
                    const std::string& to_path) {
  out << "map 1\n";
  out << "from " << from_path << "\n";
  out << "to " << to_path << "\n";
  const SquareComplex& d = *m.domain;
  const SquareComplex& c = *m.codomain;
  for (VertexId v = 0; v < d.nv(); ++v)
    out << "v " << d.vertex_name[v] << " -> " << c.vertex_name[m.v_img[v]] << "\n";
  for (EdgeId e = 0; e < d.ne(); ++e)
    out << "e " << d.edge_name[e] << " -> "
        << signed_name(c.edge_name[m.e_img[e] >> 1], dir::forward(m.e_img[e])) << "\n";
}

GroupAction read_act(std::istream& in, const std::string& origin) {
  auto lines = token_lines(in);
  expect_header(lines, "act", origin);
  GroupAction a;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.size() < 3 || t[0] != "gen" || t[1].empty() || t[1].back() != ':')
      throw ParseError(origin + ": expected 'gen NAME: images'");
    a.names.push_back(t[1].substr(0, t[1].size() - 1));
    Perm p;
    for (std::size_t k = 2; k < t.size(); ++k)
      p.img.push_back(static_cast<std::uint32_t>(std::stoul(t[k])));
    if (!p.valid()) throw ParseError(origin + ": line for " + a.names.back() +
                                     " is not a permutation");
    a.gens.push_back(std::move(p));
  }
  if (!a.gens.empty()) {
    a.npoints = a.gens[0].img.size();
    for (const Perm& p : a.gens)
      if (p.img.size() != a.npoints)
        throw ParseError(origin + ": generators act on different point counts");
  }
  return a;
}

void write_act(std::ostream& out, const GroupAction& a) {
  out << "act 1\n";
  for (std::size_t i = 0; i < a.gens.size(); ++i) {
    out << "gen " << a.names[i] << ":";
    for (auto v : a.gens[i].img) out << " " << v;
    out << "\n";
  }
}

raag::DefGraph read_gra(std::istream& in, const std::string& origin) {
  auto lines = token_lines(in);
  expect_header(lines, "gra", origin);
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t[0] == "gen" && t.size() == 2)
      names.push_back(t[1]);
    else if (t[0] == "com" && t.size() == 3)
      edges.push_back({t[1], t[2]});
    else
      throw ParseError(origin + ": unrecognized line starting '" + t[0] + "'");
  }
  raag::DefGraph g = raag::DefGraph::discrete(std::move(names));
  for (const auto& [u, v] : edges) g.add_edge(g.gen_id(u), g.gen_id(v));
  if (!g.valid()) throw ParseError(origin + ": invalid commutation graph");
  return g;
}

raag::DefGraph load_gra(const std::string& path) {
  auto f = open_file(path);
  return read_gra(f, path);
}

void write_gra(std::ostream& out, const raag::DefGraph& g) {
  out << "gra 1\n";
  for (const auto& n : g.gen_names) out << "gen " << n << "\n";
  for (std::uint32_t a = 0; a < g.rank(); ++a)
    for (std::uint32_t b = a + 1; b < g.rank(); ++b)
      if (g.adjacent(a, b)) out << "com " << g.gen_names[a] << " " << g.gen_names[b] << "\n";
}

std::vector<std::pair<std::string, bool>> parse_signed_names(const std::string& text) {
  std::vector<std::pair<std::string, bool>> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto [name, fwd] = split_sign(tok);
    if (name.empty()) throw ParseError("bare sign in word");
    out.push_back({name, fwd});
  }
  return out;
}

EdgePath path_from_names(const SquareComplex& x, VertexId start,
                         const std::vector<std::pair<std::string, bool>>& names) {
  EdgePath p;
  p.start = start;
  for (const auto& [name, fwd] : names) p.steps.push_back(dir::make(x.edge_id(name), fwd));
  p.validate(x);
  return p;
}

std::string path_names(const SquareComplex& x, const EdgePath& p) {
  std::string out;
  for (std::uint32_t c : p.steps) {
    if (!out.empty()) out += ' ';
    out += x.dir_name(c);
  }
  return out;
}

nlohmann::json structure_json(const SquareComplex& x, const StructureReport& r) {
  nlohmann::json j;
  j["report"] = 1;
  j["complex"] = {{"vertices", x.nv()}, {"edges", x.ne()}, {"squares", x.ns()}};
  j["npc"] = r.npc;
  nlohmann::json links = nlohmann::json::array();
  for (VertexId v = 0; v < x.nv(); ++v)
    links.push_back({{"vertex", x.vertex_name[v]}, {"simple", r.link_simple[v] != 0}});
  j["links"] = links;
  nlohmann::json hyps = nlohmann::json::array();
  for (const Hyperplane& h : r.hyperplanes) {
    nlohmann::json hj;
    hj["id"] = h.id;
    nlohmann::json edges = nlohmann::json::array();
    for (EdgeId e : h.edges) edges.push_back(x.edge_name[e]);
    hj["edges"] = edges;
    hj["two_sided"] = h.two_sided;
    if (!h.two_sided && !h.flip.via.empty()) {
      nlohmann::json via = nlohmann::json::array();
      for (SquareId s : h.flip.via) via.push_back(x.square_name[s]);
      hj["flip_witness"] = via;
    }
    hyps.push_back(hj);
  }
  j["hyperplanes"] = hyps;
  nlohmann::json events = nlohmann::json::array();
  for (const OsculationEvent& ev : r.events) {
    nlohmann::json ej;
    ej["kind"] = to_string(ev.kind);
    ej["at"] = x.vertex_name[ev.at];
    if (ev.kind == EventKind::kLoopSelfOsculate)
      ej["edge"] = x.edge_name[ev.dart1 >> 1];
    else
      ej["darts"] = {x.dir_name(ev.dart1), x.dir_name(ev.dart2)};
    if (ev.h1 == ev.h2)
      ej["hyperplanes"] = {ev.h1};
    else
      ej["hyperplanes"] = {ev.h1, ev.h2};
    events.push_back(ej);
  }
  j["events"] = events;
  nlohmann::json loops = nlohmann::json::array();
  for (EdgeId e : r.loop_edges) loops.push_back(x.edge_name[e]);
  j["loop_edges"] = loops;
  j["directly_special"] = r.directly_special;
  j["failures"] = r.failures;
  return j;
}

nlohmann::json action_json(const GroupAction& a) {
  std::ostringstream s;
  write_act(s, a);
  nlohmann::json j;
  j["points"] = a.npoints;
  j["act"] = s.str();
  return j;
}

std::string to_dot(const SquareComplex& x, const StructureReport* r) {
  static const char* kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                   "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080"};
  std::ostringstream out;
  out << "digraph sqc {\n";
  for (VertexId v = 0; v < x.nv(); ++v) out << "  \"" << x.vertex_name[v] << "\";\n";
  for (EdgeId e = 0; e < x.ne(); ++e) {
    out << "  \"" << x.vertex_name[x.edge_end[e][0]] << "\" -> \""
        << x.vertex_name[x.edge_end[e][1]] << "\" [label=\"" << x.edge_name[e] << "\"";
    if (r) out << ", color=\"" << kPalette[r->hyperplane_of_edge[e] % 10] << "\"";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace cubical
