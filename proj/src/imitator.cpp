#include "cubical/imitator.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace cubical {

namespace {

std::string pair_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

void require_domain_vertex(const SquareComplex& y, VertexId v) {
  if (v >= y.nv()) throw StructuralError("vertex id out of range for the imitator domain");
}

}  // namespace

void require_imitator_context(const ImitatorContext& ctx) {
  if (ctx.phi == nullptr || ctx.rx == nullptr)
    throw StructuralError("imitator context is missing its map or its codomain report");
  require_local_isometry(*ctx.phi, "imitator domain map");
  require_directly_special(*ctx.phi->codomain, *ctx.rx, "imitator codomain");
}

std::uint32_t imitator_move(const ImitatorContext& ctx, VertexId y, std::uint32_t walker_dart) {
  const SquareComplex& yc = *ctx.phi->domain;
  HyperplaneId h = ctx.rx->hyperplane_of_edge[dir::edge(walker_dart)];
  std::uint32_t found = kNone;
  for (std::uint32_t f : yc.darts_at(y)) {
    if (ctx.rx->hyperplane_of_edge[dir::edge(ctx.phi->apply_dir(f))] != h) continue;
    if (found != kNone)
      throw PropertyViolation("two darts at " + yc.vertex_name[y] + " copy the wall of " +
                              ctx.phi->codomain->dir_name(walker_dart) +
                              ": the image is not directly special over that vertex");
    found = f;
  }
  return found;
}

ImitatorTranscript imitate(const ImitatorContext& ctx, const EdgePath& walker, VertexId y) {
  require_imitator_context(ctx);
  require_domain_vertex(*ctx.phi->domain, y);
  walker.validate(*ctx.phi->codomain);
  ImitatorTranscript t;
  t.y_start = y;
  t.walker = walker;
  t.imitator.start = y;
  VertexId cur = y;
  for (std::uint32_t d : walker.steps) {
    std::uint32_t f = imitator_move(ctx, cur, d);
    t.steps.push_back({d, f});
    if (f != kNone) {
      t.imitator.steps.push_back(f);
      cur = ctx.phi->domain->head(f);
    }
  }
  t.y_end = cur;
  return t;
}

std::string ImitatorTranscript::to_text(const SquareComplex& y, const SquareComplex& x) const {
  std::string out;
  std::size_t k = 0;
  for (const ImitatorStep& s : steps) {
    out += "step " + std::to_string(k++) + ": walker " + x.dir_name(s.walker_dart) +
           ", imitator ";
    out += s.imitator_dart == kNone ? std::string("stay") : y.dir_name(s.imitator_dart);
    out += "\n";
  }
  return out;
}

ImitatorAction imitator_action(const ImitatorContext& ctx, VertexId y) {
  require_imitator_context(ctx);
  const SquareComplex& yc = *ctx.phi->domain;
  const SquareComplex& xc = *ctx.phi->codomain;
  require_domain_vertex(yc, y);
  VertexId x = ctx.phi->v_img[y];
  Pi1Basis basis = pi1_basis(xc, x);

  ImitatorAction out;
  out.on_vertices.npoints = yc.nv();
  for (std::size_t i = 0; i < basis.rank(); ++i) {
    EdgePath loop = basis.generator_loop(i);
    Perm p(yc.nv());
    for (VertexId v = 0; v < yc.nv(); ++v) {
      VertexId cur = v;
      for (std::uint32_t d : loop.steps) {
        std::uint32_t f = imitator_move(ctx, cur, d);
        if (f != kNone) cur = yc.head(f);
      }
      p.img[v] = cur;
    }
    if (!p.valid())
      throw PropertyViolation("loop " + basis.gen_name(i) +
                              " does not permute the domain vertices");
    out.on_vertices.names.push_back(basis.gen_name(i));
    out.on_vertices.gens.push_back(std::move(p));
  }

  std::vector<Perm> inv;
  inv.reserve(out.on_vertices.gens.size());
  for (const Perm& g : out.on_vertices.gens) inv.push_back(g.inverse());
  std::vector<std::uint32_t> pos(yc.nv(), kNone);
  out.orbit.push_back(y);
  pos[y] = 0;
  for (std::size_t head = 0; head < out.orbit.size(); ++head) {
    VertexId v = out.orbit[head];
    for (std::size_t i = 0; i < out.on_vertices.gens.size(); ++i) {
      for (VertexId w : {out.on_vertices.gens[i](v), inv[i](v)}) {
        if (pos[w] != kNone) continue;
        pos[w] = static_cast<std::uint32_t>(out.orbit.size());
        out.orbit.push_back(w);
      }
    }
  }

  GroupAction restricted;
  restricted.npoints = out.orbit.size();
  restricted.names = out.on_vertices.names;
  for (const Perm& g : out.on_vertices.gens) {
    Perm p(out.orbit.size());
    for (std::size_t i = 0; i < out.orbit.size(); ++i) p.img[i] = pos[g(out.orbit[i])];
    restricted.gens.push_back(std::move(p));
  }
  out.stabilizer = subgroup_from_action(xc, x, std::move(restricted));
  return out;
}

EdgePath rho(const ImitatorContext& ctx, VertexId y, const EdgePath& loop) {
  require_imitator_context(ctx);
  const SquareComplex& yc = *ctx.phi->domain;
  require_domain_vertex(yc, y);
  if (!loop.is_closed(*ctx.phi->codomain) || loop.start != ctx.phi->v_img[y])
    throw StructuralError("rho needs a loop based at the image of the chosen vertex");
  ImitatorTranscript t = imitate(ctx, loop, y);
  if (t.y_end != y)
    throw StructuralError("the loop lies outside the imitator subgroup: it carries " +
                          yc.vertex_name[y] + " to " + yc.vertex_name[t.y_end]);
  return t.imitator;
}

EdgePath CollapsingMap::apply_path(const EdgePath& p) const {
  EdgePath q;
  q.start = v_img[p.start];
  for (std::uint32_t d : p.steps) {
    std::uint32_t c = apply_dir(d);
    if (c != kNone) q.steps.push_back(c);
  }
  return q;
}

VertexId Completion::pair_vertex(VertexId y, VertexId x) const {
  return static_cast<VertexId>(y * covering.codomain->nv() + x);
}

Completion canonical_completion(const ImitatorContext& ctx) {
  require_imitator_context(ctx);
  const SquareComplex& yc = *ctx.phi->domain;
  const SquareComplex& xc = *ctx.phi->codomain;
  std::size_t ny = yc.nv();
  std::size_t nx = xc.nv();
  auto vid = [nx](VertexId y, VertexId x) { return static_cast<VertexId>(y * nx + x); };
  auto eid = [ny](EdgeId e, VertexId y) { return static_cast<EdgeId>(e * ny + y); };

  // The move along an edge's wall from each domain vertex: the traversal
  // direction never matters because both darts of an edge share the wall.
  std::vector<std::uint32_t> move(xc.ne() * ny, kNone);
  for (EdgeId e = 0; e < xc.ne(); ++e)
    for (VertexId y = 0; y < ny; ++y) move[e * ny + y] = imitator_move(ctx, y, dir::fwd(e));
  auto cross = [&](EdgeId e, VertexId y) {
    std::uint32_t f = move[e * ny + y];
    return f == kNone ? y : yc.head(f);
  };

  ComplexBuilder b;
  for (VertexId y = 0; y < ny; ++y)
    for (VertexId x = 0; x < nx; ++x)
      b.add_vertex(pair_name(yc.vertex_name[y], xc.vertex_name[x]));
  for (EdgeId e = 0; e < xc.ne(); ++e) {
    VertexId xt = xc.tail(dir::fwd(e));
    VertexId xh = xc.head(dir::fwd(e));
    for (VertexId y = 0; y < ny; ++y)
      b.add_edge("e(" + xc.edge_name[e] + ";" + yc.vertex_name[y] + "," + xc.vertex_name[xt] + ")",
                 vid(y, xt), vid(cross(e, y), xh));
  }
  for (SquareId s = 0; s < xc.ns(); ++s) {
    const Square& sq = xc.squares[s];
    for (VertexId y0 = 0; y0 < ny; ++y0) {
      std::array<std::uint32_t, 4> sides{};
      VertexId y = y0;
      for (int i = 0; i < 4; ++i) {
        std::uint32_t d = sq.side[i];
        EdgeId e = dir::edge(d);
        VertexId ynext = cross(e, y);
        // The lifted side's tail-end position is y when the side runs
        // forward and ynext when it runs backward.
        sides[i] = dir::make(eid(e, dir::forward(d) ? y : ynext), dir::forward(d));
        y = ynext;
      }
      if (y != y0)
        throw PropertyViolation("the moves around square " + xc.square_name[s] +
                                " fail to close up from " + yc.vertex_name[y0]);
      b.add_square("s(" + xc.square_name[s] + ";" + yc.vertex_name[y0] + ")", sides);
    }
  }

  Completion c;
  c.total = std::make_shared<SquareComplex>(b.build());

  c.covering.domain = c.total.get();
  c.covering.codomain = &xc;
  c.covering.v_img.resize(c.total->nv());
  for (VertexId y = 0; y < ny; ++y)
    for (VertexId x = 0; x < nx; ++x) c.covering.v_img[vid(y, x)] = x;
  c.covering.e_img.resize(c.total->ne());
  for (EdgeId e = 0; e < xc.ne(); ++e)
    for (VertexId y = 0; y < ny; ++y) c.covering.e_img[eid(e, y)] = dir::fwd(e);
  c.covering.validate();
  // The completion is a disjoint union of covers, so check the sheets
  // directly instead of requiring one connected total space.
  for (VertexId v = 0; v < c.total->nv(); ++v) {
    std::vector<std::uint32_t> got;
    for (std::uint32_t d : c.total->darts_at(v)) got.push_back(c.covering.apply_dir(d));
    std::sort(got.begin(), got.end());
    std::vector<std::uint32_t> want = xc.darts_at(c.covering.v_img[v]);
    std::sort(want.begin(), want.end());
    if (got != want)
      throw PropertyViolation("darts at " + c.total->vertex_name[v] +
                              " do not match the sheet over " +
                              xc.vertex_name[c.covering.v_img[v]]);
  }

  c.retraction.domain = c.total.get();
  c.retraction.codomain = &yc;
  c.retraction.v_img.resize(c.total->nv());
  for (VertexId y = 0; y < ny; ++y)
    for (VertexId x = 0; x < nx; ++x) c.retraction.v_img[vid(y, x)] = y;
  c.retraction.e_img.resize(c.total->ne());
  for (EdgeId e = 0; e < xc.ne(); ++e)
    for (VertexId y = 0; y < ny; ++y) c.retraction.e_img[eid(e, y)] = move[e * ny + y];

  c.embedding.domain = &yc;
  c.embedding.codomain = c.total.get();
  c.embedding.v_img.resize(ny);
  for (VertexId y = 0; y < ny; ++y) c.embedding.v_img[y] = vid(y, ctx.phi->v_img[y]);
  c.embedding.e_img.resize(yc.ne());
  for (EdgeId f = 0; f < yc.ne(); ++f) {
    std::uint32_t cimg = ctx.phi->e_img[f];
    EdgeId e = dir::edge(cimg);
    VertexId tail_pos = dir::forward(cimg) ? yc.tail(dir::fwd(f)) : yc.head(dir::fwd(f));
    c.embedding.e_img[f] = dir::make(eid(e, tail_pos), dir::forward(cimg));
  }
  c.embedding.validate();

  c.component_of_vertex.assign(c.total->nv(), kNone);
  for (VertexId v = 0; v < c.total->nv(); ++v) {
    if (c.component_of_vertex[v] != kNone) continue;
    std::uint32_t label = static_cast<std::uint32_t>(c.components++);
    std::vector<VertexId> stack{v};
    c.component_of_vertex[v] = label;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (std::uint32_t d : c.total->darts_at(u)) {
        VertexId w = c.total->head(d);
        if (c.component_of_vertex[w] != kNone) continue;
        c.component_of_vertex[w] = label;
        stack.push_back(w);
      }
    }
  }
  return c;
}

ImitatorCover imitator_cover(const ImitatorContext& ctx, VertexId y) {
  Completion c = canonical_completion(ctx);
  const SquareComplex& yc = *ctx.phi->domain;
  const SquareComplex& xc = *ctx.phi->codomain;
  require_domain_vertex(yc, y);
  VertexId x = ctx.phi->v_img[y];
  std::uint32_t comp = c.component_of_vertex[c.pair_vertex(y, x)];

  std::vector<char> v_in(c.total->nv(), 0);
  for (VertexId v = 0; v < c.total->nv(); ++v) v_in[v] = c.component_of_vertex[v] == comp;
  Subcomplex sub = Subcomplex::induced(*c.total, v_in);
  std::vector<VertexId> vmap;
  std::vector<EdgeId> emap;
  auto total = std::make_shared<SquareComplex>(sub.materialize(&vmap, &emap));

  std::vector<VertexId> v_old(total->nv(), kNone);
  for (VertexId v = 0; v < c.total->nv(); ++v)
    if (vmap[v] != kNone) v_old[vmap[v]] = v;
  std::vector<EdgeId> e_old(total->ne(), kNone);
  for (EdgeId e = 0; e < c.total->ne(); ++e)
    if (emap[e] != kNone) e_old[emap[e]] = e;

  ImitatorCover ic;
  ic.cover.total = total;
  ic.cover.map.domain = total.get();
  ic.cover.map.codomain = &xc;
  ic.cover.map.v_img.resize(total->nv());
  for (VertexId v = 0; v < total->nv(); ++v)
    ic.cover.map.v_img[v] = c.covering.v_img[v_old[v]];
  ic.cover.map.e_img.resize(total->ne());
  for (EdgeId e = 0; e < total->ne(); ++e) ic.cover.map.e_img[e] = c.covering.e_img[e_old[e]];
  ic.cover.map.validate();
  verify_covering(ic.cover.map);
  ic.cover.base_total = vmap[c.pair_vertex(y, x)];
  for (VertexId v = 0; v < total->nv(); ++v)
    if (ic.cover.map.v_img[v] == x) ic.cover.fiber.push_back(v);
  auto it = std::find(ic.cover.fiber.begin(), ic.cover.fiber.end(), ic.cover.base_total);
  std::rotate(ic.cover.fiber.begin(), it, it + 1);

  ic.retraction.domain = total.get();
  ic.retraction.codomain = &yc;
  ic.retraction.v_img.resize(total->nv());
  for (VertexId v = 0; v < total->nv(); ++v)
    ic.retraction.v_img[v] = c.retraction.v_img[v_old[v]];
  ic.retraction.e_img.resize(total->ne());
  for (EdgeId e = 0; e < total->ne(); ++e) ic.retraction.e_img[e] = c.retraction.e_img[e_old[e]];

  ic.embedding.domain = &yc;
  ic.embedding.codomain = total.get();
  ic.embedding.v_img.resize(yc.nv());
  ic.embedding.e_img.resize(yc.ne());
  for (VertexId v = 0; v < yc.nv(); ++v) {
    VertexId img = vmap[c.embedding.v_img[v]];
    if (img == kNone)
      throw StructuralError("the embedded image leaves the based component at " +
                            yc.vertex_name[v]);
    ic.embedding.v_img[v] = img;
  }
  for (EdgeId f = 0; f < yc.ne(); ++f) {
    std::uint32_t cimg = c.embedding.e_img[f];
    ic.embedding.e_img[f] = dir::make(emap[dir::edge(cimg)], dir::forward(cimg));
  }
  ic.embedding.validate();
  return ic;
}

EmbedAllResult embed_all(const SquareComplex& x, const StructureReport& rx,
                         const std::vector<EmbedAllInput>& inputs, VertexId base,
                         Budgets budgets) {
  require_directly_special(x, rx, "the ambient complex");
  if (inputs.empty()) throw StructuralError("embed_all needs at least one map");

  std::vector<CoveringMap> parts;
  parts.reserve(inputs.size());
  for (const EmbedAllInput& in : inputs) {
    if (in.phi == nullptr || in.phi->codomain != &x)
      throw StructuralError("every embed_all map must land in the given complex");
    ImitatorContext ctx{in.phi, &rx};
    parts.push_back(rebase_cover(imitator_cover(ctx, in.y_base).cover, base));
  }
  std::vector<const CoveringMap*> ptrs;
  for (const CoveringMap& c : parts) ptrs.push_back(&c);

  EmbedAllResult res;
  res.cover = regular_closure(refine(x, base, ptrs, budgets), budgets);

  std::vector<std::string> fails;
  StructureReport rhat = analyze(*res.cover.total);
  if (!rhat.directly_special) fails.push_back("the cover is not directly special");
  if (!is_normal(subgroup_of_cover(res.cover))) fails.push_back("the cover is not regular");
  for (const EmbedAllInput& in : inputs) {
    std::vector<Elevation> els = elevations(*in.phi, res.cover, budgets);
    for (const Elevation& el : els) {
      std::vector<VertexId> vs = el.to_cover.v_img;
      std::sort(vs.begin(), vs.end());
      bool inj = std::adjacent_find(vs.begin(), vs.end()) == vs.end();
      std::vector<EdgeId> es;
      for (std::uint32_t cimg : el.to_cover.e_img) es.push_back(dir::edge(cimg));
      std::sort(es.begin(), es.end());
      inj = inj && std::adjacent_find(es.begin(), es.end()) == es.end();
      if (!inj) {
        fails.push_back("an elevation of the map based at " +
                        in.phi->domain->vertex_name[in.y_base] + " is not embedded");
        continue;
      }
      StructureReport rel = analyze(*el.total);
      for (const Hyperplane& h : rhat.hyperplanes) {
        if (complex_hyperplane_relation(el.to_cover, rel, rhat, h.id).inter_osculates) {
          fails.push_back("an elevation inter-osculates with a wall of the cover");
          break;
        }
      }
    }
    res.elevations.push_back(std::move(els));
  }
  if (!fails.empty()) {
    std::string msg = "embed_all verification failed:";
    for (const std::string& f : fails) msg += "\n  " + f;
    throw PropertyViolation(msg);
  }
  return res;
}

}  // namespace cubical
