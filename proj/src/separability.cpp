#include "cubical/separability.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "cubical/io.hpp"

namespace cubical {

namespace {

EdgePath lift_into_ball(const DevelopedBall& d, const EdgePath& p) {
  const SquareComplex& b = *d.ball;
  EdgePath lift{d.center, {}};
  VertexId at = d.center;
  for (std::uint32_t step : p.steps) {
    std::uint32_t found = kNone;
    for (std::uint32_t c : b.darts_at(at)) {
      if (d.to_base.apply_dir(c) == step) {
        found = c;
        break;
      }
    }
    if (found == kNone) throw StructuralError("patch too small to carry the loop");
    lift.steps.push_back(found);
    at = b.head(found);
  }
  return lift;
}

// A prepared coset factor: its imitator dynamics and pushed generators.
struct Factor {
  const CombinatorialMap* phi = nullptr;
  VertexId y = kNone;
  ImitatorContext ctx;
  ImitatorAction action;
  std::vector<EdgePath> gens;  // loops at the ambient basepoint
};

Factor prepare_factor(const SquareComplex& x, const StructureReport& rx, const CosetFactor& f,
                      VertexId base, const std::string& role) {
  if (f.phi == nullptr || f.phi->codomain != &x)
    throw StructuralError(role + " must map into the ambient complex");
  if (f.phi->domain == nullptr || f.y >= f.phi->domain->nv() || f.phi->v_img[f.y] != base)
    throw StructuralError(role + " must be based over the element's basepoint");
  Factor out;
  out.phi = f.phi;
  out.y = f.y;
  out.ctx = ImitatorContext{f.phi, &rx};
  require_imitator_context(out.ctx);
  out.action = imitator_action(out.ctx, f.y);
  Pi1Basis yb = pi1_basis(*f.phi->domain, f.y);
  out.gens.reserve(yb.rank());
  for (std::size_t i = 0; i < yb.rank(); ++i)
    out.gens.push_back(free_reduce(f.phi->apply_path(yb.generator_loop(i))));
  return out;
}

bool stabilizes(const Factor& f, const EdgePath& h) { return f.action.stabilizer.contains(h); }

EdgePath retract_along(const Factor& f, const EdgePath& h) {
  return free_reduce(f.phi->apply_path(rho(f.ctx, f.y, h)));
}

// Entrapment membership: h lies in the factor's subgroup exactly when the
// imitator returns to the basepoint along a route homotopic to h.
bool member(const Factor& f, const EdgePath& h, const WordOracle& oracle) {
  if (!stabilizes(f, h)) return false;
  return oracle.same_class(retract_along(f, h), h);
}

// The retraction of the factor as a reusable homomorphism on its stabilizer.
std::function<EdgePath(const EdgePath&)> retraction_fn(const Factor& f) {
  return [ctx = f.ctx, y = f.y](const EdgePath& h) {
    return free_reduce(ctx.phi->apply_path(rho(ctx, y, h)));
  };
}

// Generators of K intersected with the finite-index domain, by Schreier's
// lemma on the K-orbit of the base coset, with the transversal words.
struct IntoDomain {
  std::vector<EdgePath> gens;
  std::map<std::uint32_t, EdgePath> coset_word;
};

IntoDomain intersect_into(const SubgroupRep& d, const std::vector<EdgePath>& kgens,
                          const SquareComplex& x, Budgets budgets) {
  IntoDomain out;
  std::vector<Perm> imgs, invs;
  for (const auto& k : kgens) {
    imgs.push_back(d.eval_loop(k));
    invs.push_back(imgs.back().inverse());
  }
  out.coset_word[0] = EdgePath{d.base(), {}};
  std::deque<std::uint32_t> bfs{0};
  while (!bfs.empty()) {
    std::uint32_t p = bfs.front();
    bfs.pop_front();
    for (std::size_t j = 0; j < imgs.size(); ++j) {
      for (int rev = 0; rev < 2; ++rev) {
        std::uint32_t tgt = rev ? invs[j].img[p] : imgs[j].img[p];
        if (out.coset_word.count(tgt)) continue;
        if (out.coset_word.size() >= budgets.orbit)
          throw BudgetError("factor coset orbit budget");
        out.coset_word[tgt] =
            free_reduce(out.coset_word.at(p) + (rev ? kgens[j].reversed(x) : kgens[j]));
        bfs.push_back(tgt);
      }
    }
  }
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& [p, wp] : out.coset_word) {
    for (std::size_t j = 0; j < imgs.size(); ++j) {
      EdgePath s = free_reduce(wp + kgens[j] + out.coset_word.at(imgs[j].img[p]).reversed(x));
      if (s.empty()) continue;
      if (seen.insert(s.steps).second) out.gens.push_back(std::move(s));
    }
  }
  return out;
}

// One factor of a coset-set image: a subgroup closure or a fixed element.
struct CosetToken {
  const std::vector<EdgePath>* subgroup = nullptr;
  const EdgePath* element = nullptr;
};

std::set<Perm> token_image(const FiniteQuotient& t, const std::vector<CosetToken>& tokens,
                           Budgets budgets) {
  std::set<Perm> acc{Perm::identity(t.npoints)};
  for (const auto& tok : tokens) {
    std::set<Perm> next;
    if (tok.element != nullptr) {
      Perm e = t.eval(*tok.element);
      for (const Perm& a : acc) next.insert(a * e);
    } else {
      std::vector<Perm> sub = image_closure(t, *tok.subgroup, budgets);
      for (const Perm& a : acc) {
        for (const Perm& b : sub) {
          next.insert(a * b);
          if (next.size() > budgets.orbit) throw BudgetError("coset image enumeration budget");
        }
      }
    }
    acc = std::move(next);
  }
  return acc;
}

bool avoids(const FiniteQuotient& t, const EdgePath& g, const std::vector<CosetToken>& tokens,
            Budgets budgets, std::size_t* size_out = nullptr) {
  std::set<Perm> img = token_image(t, tokens, budgets);
  if (size_out != nullptr) *size_out = img.size();
  return img.find(t.eval(g)) == img.end();
}

CosetToken sub_token(const std::vector<EdgePath>& gens) { return CosetToken{&gens, nullptr}; }
CosetToken elem_token(const EdgePath& e) { return CosetToken{nullptr, &e}; }

// Cheap full-group quotients to scan when no constructive route applies:
// each factor's coset action, then mod-n abelianizations.
std::vector<FiniteQuotient> simple_candidates(const SquareComplex& x, VertexId base,
                                              const std::vector<Factor>& fs,
                                              const SeparationSpec& spec) {
  std::vector<FiniteQuotient> out;
  for (const Factor& f : fs) {
    if (f.action.stabilizer.index() > 1)
      out.push_back(quotient_from_action(x, base, f.action.stabilizer.action));
  }
  for (std::int64_t n = 2; n <= spec.modulus_budget; ++n)
    out.push_back(abelianization_quotient(x, base, n, spec.budgets));
  return out;
}

// A verified quotient with q(delta) outside the image of <gens>, where gens
// generate the factor's subgroup intersected with the caller's domain.
std::optional<FiniteQuotient> single_separator(const SquareComplex& x, const StructureReport& rx,
                                               VertexId base, const EdgePath& delta,
                                               const Factor& f, const std::vector<EdgePath>& gens,
                                               const SeparationSpec& spec) {
  std::vector<CosetToken> tokens{sub_token(gens)};
  if (!stabilizes(f, delta)) {
    // The factor's coset action: the subgroup fixes the base coset, delta
    // does not.
    FiniteQuotient q = quotient_from_action(x, base, f.action.stabilizer.action);
    if (avoids(q, delta, tokens, spec.budgets)) return q;
  } else if (f.action.stabilizer.index() == 1) {
    // The retraction is defined on the whole group: pair an essential-loop
    // witness for the retraction defect with the retraction itself.
    EdgePath eps = free_reduce(delta + retract_along(f, delta).reversed(x));
    if (!spec.oracle->trivial(eps)) {
      RfWitness w = rf_witness(x, rx, eps, *spec.oracle, spec.budgets);
      FiniteQuotient t = product_quotient(w.quotient, retraction_fn(f), f.action.stabilizer);
      if (avoids(t, delta, tokens, spec.budgets)) return t;
    }
  }
  for (std::int64_t n = 2; n <= spec.modulus_budget; ++n) {
    FiniteQuotient q = abelianization_quotient(x, base, n, spec.budgets);
    if (avoids(q, delta, tokens, spec.budgets)) return q;
  }
  return std::nullopt;
}

SeparationWitness separate_single(const SquareComplex& x, const SeparationSpec& spec,
                                  const Factor& f) {
  VertexId base = spec.g.start;
  SeparationWitness out;
  out.factor_generators = {f.gens};
  std::vector<CosetToken> tokens{sub_token(f.gens)};
  if (!stabilizes(f, spec.g)) {
    out.quotient = quotient_from_action(x, base, f.action.stabilizer.action);
    if (!avoids(out.quotient, spec.g, tokens, spec.budgets, &out.image_size))
      throw PropertyViolation("coset action failed to separate an element outside the stabilizer");
    return out;
  }
  EdgePath r = retract_along(f, spec.g);
  EdgePath delta = free_reduce(spec.g + r.reversed(x));
  if (spec.oracle->trivial(delta))
    throw StructuralError("the element lies in the subgroup: homotopic to the factor loop " +
                          path_names(x, r));
  RfWitness w = rf_witness(x, *spec.rx, delta, *spec.oracle, spec.budgets);
  out.quotient = product_quotient(w.quotient, retraction_fn(f), f.action.stabilizer);
  if (!avoids(out.quotient, spec.g, tokens, spec.budgets, &out.image_size))
    throw PropertyViolation("pair quotient failed to separate the element from the subgroup");
  return out;
}

SeparationWitness separate_double(const SquareComplex& x, const SeparationSpec& spec,
                                  const Factor& f1, const Factor& f2) {
  VertexId base = spec.g.start;
  SeparationWitness out;
  if (!stabilizes(f1, spec.g)) {
    // The retraction does not see g; scan simple quotients against the full
    // factor generators.
    std::vector<CosetToken> tokens{sub_token(f1.gens), sub_token(f2.gens)};
    for (FiniteQuotient& q : simple_candidates(x, base, {f1, f2}, spec)) {
      std::size_t sz = 0;
      if (avoids(q, spec.g, tokens, spec.budgets, &sz)) {
        out.quotient = std::move(q);
        out.factor_generators = {f1.gens, f2.gens};
        out.image_size = sz;
        return out;
      }
    }
    throw BudgetError("no scanned quotient separates the element; inconclusive");
  }

  EdgePath rg = retract_along(f1, spec.g);
  EdgePath delta = free_reduce(rg.reversed(x) + spec.g);
  IntoDomain k2dot = intersect_into(f1.action.stabilizer, f2.gens, x, spec.budgets);

  for (const EdgePath& s : k2dot.gens) {
    EdgePath rs = retract_along(f1, s);
    if (!rs.empty() && !member(f2, rs, *spec.oracle))
      throw StructuralError(
          "retraction hypothesis fails: factor-2 generator " + path_names(x, s) +
          " retracts to " + path_names(x, rs) + " outside factor 2");
  }

  if (member(f2, delta, *spec.oracle))
    throw StructuralError("the element factors through the coset set: retraction image " +
                          path_names(x, rg) + " times factor-2 loop " + path_names(x, delta));

  std::optional<FiniteQuotient> q =
      single_separator(x, *spec.rx, base, delta, f2, k2dot.gens, spec);
  if (!q) throw BudgetError("no auxiliary quotient separates the retraction defect; inconclusive");

  out.quotient = product_quotient(*q, retraction_fn(f1), f1.action.stabilizer);
  out.factor_generators = {f1.gens, k2dot.gens};
  std::vector<CosetToken> tokens{sub_token(f1.gens), sub_token(k2dot.gens)};
  if (!avoids(out.quotient, spec.g, tokens, spec.budgets, &out.image_size))
    throw PropertyViolation("pair quotient failed to separate the element from the double coset");
  return out;
}

SeparationWitness separate_triple(const SquareComplex& x, const SeparationSpec& spec,
                                  const Factor& f1, const Factor& f2, const Factor& f3) {
  VertexId base = spec.g.start;
  SeparationWitness out;
  if (!stabilizes(f2, spec.g)) {
    std::vector<CosetToken> tokens{sub_token(f1.gens), sub_token(f2.gens), sub_token(f3.gens)};
    for (FiniteQuotient& q : simple_candidates(x, base, {f1, f2, f3}, spec)) {
      std::size_t sz = 0;
      if (avoids(q, spec.g, tokens, spec.budgets, &sz)) {
        out.quotient = std::move(q);
        out.factor_generators = {f1.gens, f2.gens, f3.gens};
        out.image_size = sz;
        return out;
      }
    }
    throw BudgetError("no scanned quotient separates the element; inconclusive");
  }

  EdgePath u = retract_along(f2, spec.g);
  IntoDomain k1dot = intersect_into(f2.action.stabilizer, f1.gens, x, spec.budgets);
  IntoDomain k3dot = intersect_into(f2.action.stabilizer, f3.gens, x, spec.budgets);

  auto check_hypothesis = [&](const Factor& side, const IntoDomain& dot, const char* role) {
    for (const EdgePath& s : dot.gens) {
      EdgePath rs = retract_along(f2, s);
      if (!rs.empty() && !member(side, rs, *spec.oracle))
        throw StructuralError(std::string("retraction hypothesis fails: ") + role +
                              " generator " + path_names(x, s) + " retracts to " +
                              path_names(x, rs) + " outside its factor");
    }
  };
  check_hypothesis(f1, k1dot, "factor-1");
  check_hypothesis(f3, k3dot, "factor-3");

  EdgePath left = free_reduce(spec.g + u.reversed(x));
  if (member(f1, left, *spec.oracle))
    throw StructuralError("the element factors through the coset set: factor-1 loop " +
                          path_names(x, left) + " times retraction image " + path_names(x, u));
  EdgePath right = free_reduce(u.reversed(x) + spec.g);
  if (member(f3, right, *spec.oracle))
    throw StructuralError("the element factors through the coset set: retraction image " +
                          path_names(x, u) + " times factor-3 loop " + path_names(x, right));

  // Auxiliary search: q with q(g) outside q(K1.)q(u)q(K3.).
  std::vector<CosetToken> aux_tokens{sub_token(k1dot.gens), elem_token(u), sub_token(k3dot.gens)};
  std::optional<FiniteQuotient> q;

  if (f1.action.stabilizer.index() == 1 && f3.action.stabilizer.index() == 1) {
    // Constructive route: peel u off and run the double-coset combinator
    // against factor 1 and the u-conjugate of factor 3.
    EdgePath gp = left;  // g times u inverse
    EdgePath r1 = retract_along(f1, gp);
    EdgePath delta2 = free_reduce(r1.reversed(x) + gp);
    std::vector<EdgePath> conj3;
    conj3.reserve(f3.gens.size());
    for (const EdgePath& k : f3.gens)
      conj3.push_back(free_reduce(u + k + u.reversed(x)));
    auto rho3c = [u, &x, ctx = f3.ctx, y = f3.y](const EdgePath& h) {
      EdgePath inner = free_reduce(u.reversed(x) + h + u);
      EdgePath r = free_reduce(ctx.phi->apply_path(rho(ctx, y, inner)));
      return free_reduce(u + r + u.reversed(x));
    };
    bool conj_hypothesis = true;
    for (const EdgePath& c : conj3) {
      EdgePath rc = retract_along(f1, c);
      if (rc.empty()) continue;
      if (!member(f3, free_reduce(u.reversed(x) + rc + u), *spec.oracle)) {
        conj_hypothesis = false;
        break;
      }
    }
    EdgePath eps = free_reduce(delta2 + rho3c(delta2).reversed(x));
    if (conj_hypothesis && !spec.oracle->trivial(eps)) {
      RfWitness w = rf_witness(x, *spec.rx, eps, *spec.oracle, spec.budgets);
      FiniteQuotient inner = product_quotient(w.quotient, rho3c, f3.action.stabilizer);
      FiniteQuotient mid = product_quotient(inner, retraction_fn(f1), f1.action.stabilizer);
      if (avoids(mid, spec.g, aux_tokens, spec.budgets)) q = std::move(mid);
    }
  }
  if (!q) {
    for (FiniteQuotient& cand : simple_candidates(x, base, {f1, f2, f3}, spec)) {
      if (avoids(cand, spec.g, aux_tokens, spec.budgets)) {
        q = std::move(cand);
        break;
      }
    }
  }
  if (!q) throw BudgetError("no auxiliary quotient separates the conjugated double coset; inconclusive");

  out.quotient = product_quotient(*q, retraction_fn(f2), f2.action.stabilizer);
  out.factor_generators = {k1dot.gens, f2.gens, k3dot.gens};
  std::vector<CosetToken> tokens{sub_token(k1dot.gens), sub_token(f2.gens), sub_token(k3dot.gens)};
  if (!avoids(out.quotient, spec.g, tokens, spec.budgets, &out.image_size))
    throw PropertyViolation("pair quotient failed to separate the element from the triple coset");
  return out;
}

}  // namespace

RfWitness rf_witness(const SquareComplex& x, const StructureReport& rx, const EdgePath& gamma,
                     const WordOracle& oracle, Budgets budgets) {
  gamma.validate(x);
  if (!gamma.is_closed(x)) throw StructuralError("the witness target must be a based loop");
  if (oracle.trivial(gamma))
    throw StructuralError("the loop is null-homotopic; every finite quotient kills it");

  // Depth of any hull vertex is at most the loop's length, so this radius
  // keeps the hull off the development boundary.
  std::size_t radius = gamma.size() + 1;
  DevelopedBall d = develop_ball(x, gamma.start, radius, oracle, budgets);
  EdgePath lifted = lift_into_ball(d, gamma);
  Subcomplex hull = hull_of_path(d, lifted);

  RfWitness out;
  std::vector<VertexId> v_new;
  std::vector<EdgeId> e_new;
  out.hull = std::make_shared<SquareComplex>(hull.materialize(&v_new, &e_new));
  CombinatorialMap incl = inclusion_map(*out.hull, *d.ball, v_new, e_new);
  out.patch = std::make_shared<CombinatorialMap>(compose(incl, d.to_base));
  out.hull_base = v_new[d.center];
  out.hull_end = v_new[lifted.end(*d.ball)];

  ImitatorContext ctx{out.patch.get(), &rx};
  require_imitator_context(ctx);
  ImitatorAction act = imitator_action(ctx, out.hull_base);
  out.quotient = quotient_from_action(x, gamma.start, act.on_vertices);

  Perm img = out.quotient.eval(gamma);
  if (img.img[out.hull_base] != out.hull_end || out.hull_base == out.hull_end)
    throw PropertyViolation("the patch action failed to move the base lift along the loop");
  return out;
}

SeparationWitness separate_coset(const SeparationSpec& spec) {
  if (spec.x == nullptr || spec.rx == nullptr || spec.oracle == nullptr)
    throw StructuralError("separation spec needs a complex, its structure, and an oracle");
  const SquareComplex& x = *spec.x;
  spec.g.validate(x);
  if (!spec.g.is_closed(x)) throw StructuralError("the element must be a based loop");
  if (spec.factors.empty() || spec.factors.size() > 3)
    throw StructuralError("coset sets carry one, two or three factors");

  VertexId base = spec.g.start;
  std::vector<Factor> fs;
  fs.reserve(spec.factors.size());
  for (std::size_t i = 0; i < spec.factors.size(); ++i)
    fs.push_back(prepare_factor(x, *spec.rx, spec.factors[i], base,
                                "factor " + std::to_string(i + 1)));

  if (fs.size() == 1) return separate_single(x, spec, fs[0]);
  if (fs.size() == 2) return separate_double(x, spec, fs[0], fs[1]);
  return separate_triple(x, spec, fs[0], fs[1], fs[2]);
}

}  // namespace cubical
