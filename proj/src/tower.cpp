#include "pfg/tower.hpp"

#include <algorithm>

#include "pfg/catalog.hpp"
#include "pfg/group_ops.hpp"

namespace pfg {

namespace {

using Map = std::vector<Elem>;

void need_depth(std::size_t depth) {
  if (depth < 1) fail(ErrorKind::ParamOutOfRange, "tower depth must be >= 1");
}

void need_prime(std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorKind::ParamOutOfRange, std::to_string(p) + " is not prime");
}

TowerBuild finish(Tower t, std::vector<Map> endo_maps) {
  TowerBuild b{std::move(t), {}};
  for (std::size_t k = 0; k < endo_maps.size(); ++k)
    b.family.endos.push_back(Endomorphism(b.tower.levels[k], std::move(endo_maps[k])));
  validate_coherence(b.tower, b.family);
  return b;
}

// Elements of (Z/m)^n as mixed-radix digits, matching nested direct_product.
std::vector<std::uint64_t> digits(std::uint64_t x, std::uint64_t m, std::size_t n) {
  std::vector<std::uint64_t> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = x % m;
    x /= m;
  }
  return d;
}

std::uint64_t undigits(const std::vector<std::uint64_t>& d, std::uint64_t m) {
  std::uint64_t x = 0;
  for (std::size_t i = d.size(); i-- > 0;) x = x * m + d[i];
  return x;
}

}  // namespace

std::string to_string(const TowerSpec& spec) {
  std::string s = spec.kind + "(";
  bool first = true;
  for (const auto& part : spec.parts) {
    s += (first ? "" : ", ") + to_string(part);
    first = false;
  }
  for (auto v : spec.params) {
    s += (first ? "" : ", ") + std::to_string(v);
    first = false;
  }
  return s + ")";
}

void validate_coherence(const Tower& t, const CoherentEndoFamily& f) {
  if (t.connecting.size() + 1 != t.levels.size())
    fail(ErrorKind::CoherenceViolation, "tower needs one connecting map per adjacent pair of levels");
  if (f.endos.size() != t.levels.size())
    fail(ErrorKind::CoherenceViolation, "family needs one endomorphism per level");
  for (std::size_t k = 0; k < t.levels.size(); ++k)
    if (f.endos[k].group() != t.levels[k])
      fail(ErrorKind::CoherenceViolation, "endomorphism at level " + std::to_string(k + 1) + " acts on another group",
           {k + 1});
  for (std::size_t k = 0; k + 1 < t.levels.size(); ++k) {
    const auto& pi = t.connecting[k];
    if (pi.domain() != t.levels[k + 1] || pi.codomain() != t.levels[k])
      fail(ErrorKind::CoherenceViolation, "connecting map " + std::to_string(k + 1) + " has wrong endpoints", {k + 1});
    if (!image(pi).is_whole())
      fail(ErrorKind::CoherenceViolation, "connecting map " + std::to_string(k + 1) + " is not surjective", {k + 1});
    for (Elem x = 0; x < t.levels[k + 1]->order(); ++x)
      if (pi(f.endos[k + 1](x)) != f.endos[k](pi(x)))
        fail(ErrorKind::CoherenceViolation, "square at level " + std::to_string(k + 1) + " fails at element " +
                                                std::to_string(x), {k + 1, x});
  }
}

CoherentEndoFamily identity_family(const Tower& t) {
  CoherentEndoFamily f;
  for (const auto& g : t.levels) f.endos.push_back(Endomorphism::identity(g));
  return f;
}

GroupHom projection(const Tower& t, std::size_t from, std::size_t to) {
  if (to > from || from >= t.depth()) fail(ErrorKind::ParamOutOfRange, "projection goes down the tower");
  auto p = GroupHom::identity(t.levels[from]);
  for (std::size_t k = from; k > to; --k) p = compose(p, t.connecting[k - 1]);
  return p;
}

TowerBuild zpn_tower(std::uint64_t p, std::size_t n, std::size_t depth) {
  need_prime(p);
  need_depth(depth);
  if (n < 1) fail(ErrorKind::ParamOutOfRange, "zpn needs n >= 1");
  Tower t;
  t.label = n == 1 ? "Z_" + std::to_string(p) : "Z_" + std::to_string(p) + "^" + std::to_string(n);
  std::vector<Map> endos;
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::uint64_t m = ipow(p, static_cast<unsigned>(k));
    auto c = cyclic(m);
    GroupPtr g = c;
    for (std::size_t i = 1; i < n; ++i) g = direct_product(g, c);
    Map phi(g->order());
    for (Elem x = 0; x < g->order(); ++x) {
      auto d = digits(x, m, n);
      for (auto& v : d) v = (v * p) % m;
      phi[x] = static_cast<Elem>(undigits(d, m));
    }
    if (k > 1) {
      const std::uint64_t lower = m / p;
      const auto& below = t.levels.back();
      Map pi(g->order());
      for (Elem x = 0; x < g->order(); ++x) {
        auto d = digits(x, m, n);
        for (auto& v : d) v %= lower;
        pi[x] = static_cast<Elem>(undigits(d, lower));
      }
      t.connecting.emplace_back(g, below, std::move(pi));
    }
    t.levels.push_back(g);
    endos.push_back(std::move(phi));
  }
  return finish(std::move(t), std::move(endos));
}

TowerBuild zp_tower(std::uint64_t p, std::size_t depth) { return zpn_tower(p, 1, depth); }

TowerBuild units_semidirect_tower(std::uint64_t p, std::size_t depth) {
  need_prime(p);
  need_depth(depth);
  Tower t;
  t.label = "Z_" + std::to_string(p) + " : U(Z_" + std::to_string(p) + ")";
  std::vector<Map> endos;
  std::vector<std::uint64_t> lower_values;
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::uint64_t m = ipow(p, static_cast<unsigned>(k));
    auto n = cyclic(m);
    auto u = units_mod(p, static_cast<unsigned>(k));
    auto g = semidirect(n, u, mult_action(n, u));
    // (a, u) -> (p a, u)
    Map phi(g->order());
    for (Elem x = 0; x < g->order(); ++x) {
      auto [a, h] = g->coordinates(x);
      phi[x] = g->from_coordinates(static_cast<Elem>((a * p) % m), h);
    }
    const auto& values = u->structure().values;
    if (k > 1) {
      const std::uint64_t lower = m / p;
      const auto& below = t.levels.back();
      Map pi(g->order());
      for (Elem x = 0; x < g->order(); ++x) {
        auto [a, h] = g->coordinates(x);
        auto v = values[h] % lower;
        auto hl = static_cast<Elem>(std::lower_bound(lower_values.begin(), lower_values.end(), v) - lower_values.begin());
        pi[x] = below->from_coordinates(static_cast<Elem>(a % lower), hl);
      }
      t.connecting.emplace_back(g, below, std::move(pi));
    }
    lower_values = values;
    t.levels.push_back(g);
    endos.push_back(std::move(phi));
  }
  return finish(std::move(t), std::move(endos));
}

TowerBuild product_tower(const TowerBuild& a, const TowerBuild& b) {
  if (a.tower.depth() != b.tower.depth()) fail(ErrorKind::ParamOutOfRange, "product of towers of different depths");
  Tower t;
  t.label = "(" + a.tower.label + ") x (" + b.tower.label + ")";
  std::vector<Map> endos;
  for (std::size_t k = 0; k < a.tower.depth(); ++k) {
    const auto& ga = a.tower.levels[k];
    const auto& gb = b.tower.levels[k];
    auto g = direct_product(ga, gb);
    Map phi(g->order());
    for (Elem x = 0; x < g->order(); ++x) {
      auto [xa, xb] = g->coordinates(x);
      phi[x] = g->from_coordinates(a.family.endos[k](xa), b.family.endos[k](xb));
    }
    if (k > 0) {
      const auto& below = t.levels.back();
      Map pi(g->order());
      for (Elem x = 0; x < g->order(); ++x) {
        auto [xa, xb] = g->coordinates(x);
        pi[x] = below->from_coordinates(a.tower.connecting[k - 1](xa), b.tower.connecting[k - 1](xb));
      }
      t.connecting.emplace_back(g, below, std::move(pi));
    }
    t.levels.push_back(g);
    endos.push_back(std::move(phi));
  }
  return finish(std::move(t), std::move(endos));
}

TowerBuild s3_times_z2_tower(std::size_t depth) {
  need_depth(depth);
  Tower t;
  t.label = "S3 x Z_2";
  std::vector<Map> endos;
  auto s3 = symmetric(3);
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::uint64_t m = ipow(2, static_cast<unsigned>(k));
    auto g = direct_product(s3, cyclic(m));
    // (s, x) -> (1, 2x)
    Map phi(g->order());
    for (Elem x = 0; x < g->order(); ++x) {
      auto [s, c] = g->coordinates(x);
      (void)s;
      phi[x] = g->from_coordinates(0, static_cast<Elem>((2 * c) % m));
    }
    if (k > 1) {
      const auto& below = t.levels.back();
      Map pi(g->order());
      for (Elem x = 0; x < g->order(); ++x) {
        auto [s, c] = g->coordinates(x);
        pi[x] = below->from_coordinates(s, static_cast<Elem>(c % (m / 2)));
      }
      t.connecting.emplace_back(g, below, std::move(pi));
    }
    t.levels.push_back(g);
    endos.push_back(std::move(phi));
  }
  return finish(std::move(t), std::move(endos));
}

TowerBuild trivial_tower(std::size_t depth) {
  need_depth(depth);
  Tower t;
  t.label = "1";
  std::vector<Map> endos;
  for (std::size_t k = 0; k < depth; ++k) {
    auto g = cyclic(1);
    if (k > 0) t.connecting.emplace_back(g, t.levels.back(), Map{0});
    t.levels.push_back(g);
    endos.push_back(Map{0});
  }
  return finish(std::move(t), std::move(endos));
}

TowerBuild build_tower(const TowerSpec& spec, std::size_t depth) {
  auto params = [&](std::size_t n) {
    if (spec.params.size() != n || !spec.parts.empty())
      fail(ErrorKind::ParamOutOfRange, spec.kind + " takes " + std::to_string(n) + " integer parameter(s)");
  };
  if (spec.kind == "zp") {
    params(1);
    return zp_tower(spec.params[0], depth);
  }
  if (spec.kind == "zpn") {
    params(2);
    return zpn_tower(spec.params[0], spec.params[1], depth);
  }
  if (spec.kind == "units_semidirect") {
    params(1);
    return units_semidirect_tower(spec.params[0], depth);
  }
  if (spec.kind == "s3_times_z2") {
    params(0);
    return s3_times_z2_tower(depth);
  }
  if (spec.kind == "trivial") {
    params(0);
    return trivial_tower(depth);
  }
  if (spec.kind == "product") {
    if (spec.parts.size() != 2 || !spec.params.empty())
      fail(ErrorKind::ParamOutOfRange, "product takes two tower builders");
    return product_tower(build_tower(spec.parts[0], depth), build_tower(spec.parts[1], depth));
  }
  fail(ErrorKind::ParamOutOfRange, "unknown tower builder '" + spec.kind + "'");
}

LimitDiagnostics limit_diagnostics(const Tower& t, const CoherentEndoFamily& f) {
  LimitDiagnostics out;
  const std::size_t d = t.depth();
  std::vector<Subgroup> kernels;
  for (const auto& e : f.endos) kernels.push_back(kernel(e));
  out.vanishing_level.assign(d, 0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t top = k; top < d; ++top)
      if (image(projection(t, top, k), kernels[top]).is_trivial()) {
        out.vanishing_level[k] = top + 1;
        break;
      }
  // The top level has nothing above it, so only levels below it can be
  // certified; a one-level tower certifies nothing.
  while (out.verified_depth < d && out.vanishing_level[out.verified_depth] != 0) ++out.verified_depth;
  const std::size_t needed = d > 1 ? d - 1 : 1;
  out.limit_injective = out.verified_depth >= needed;
  if (!out.limit_injective && out.verified_depth < d) {
    const std::size_t k = out.verified_depth;
    auto proj = image(projection(t, d - 1, k), kernels[d - 1]);
    out.witness = {k + 1, proj.mask().first_nonidentity()};
  }

  for (const auto& e : f.endos) out.image_indices.push_back(image(e).index());
  out.image_index_bound = out.image_indices.back();
  out.image_open = d == 1 || out.image_indices[d - 1] == out.image_indices[d - 2];
  return out;
}

bool TowerReport::theorem_a_passed() const {
  return std::all_of(theorem_a.begin(), theorem_a.end(), [](const CheckRecord& r) { return r.passed(); });
}

bool TowerReport::inclusions_hold() const {
  return std::all_of(coherence.begin(), coherence.end(), [](const LevelCoherence& c) { return c.projection_inclusion; });
}

TowerReport levelwise_contraction(const Tower& t, const CoherentEndoFamily& f) {
  validate_coherence(t, f);
  TowerReport rep;
  for (const auto& e : f.endos) {
    rep.levels.push_back(contraction(e));
    rep.theorem_a.push_back(verify_theorem_A(e, rep.levels.back()));
  }
  rep.limit = limit_diagnostics(t, f);
  for (std::size_t k = 0; k + 1 < t.depth(); ++k) {
    const auto& pi = t.connecting[k];
    auto con_down = image(pi, rep.levels[k + 1].con);
    auto st_down = image(pi, rep.levels[k + 1].stable_image);
    rep.coherence.push_back({con_down.subset_of(rep.levels[k].con), con_down == rep.levels[k].con,
                             st_down == rep.levels[k].stable_image});
  }
  return rep;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not_applicable";
    case Verdict::HypothesesNotMet: return "hypotheses_not_met";
  }
  return "unknown";
}

TheoremBReport verify_theorem_B_tower(const Tower& t, const std::vector<CoherentEndoFamily>& lambda) {
  if (lambda.empty()) fail(ErrorKind::ParamOutOfRange, "Theorem B needs at least one endomorphism family");
  TheoremBReport rep;
  rep.hypotheses_met = true;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    validate_coherence(t, lambda[i]);
    rep.limits.push_back(limit_diagnostics(t, lambda[i]));
    const auto& l = rep.limits.back();
    bool ok = l.limit_injective && l.image_open;
    rep.checks.add("hypotheses[" + std::to_string(i) + "]", ok,
                   "limit_injective=" + std::string(l.limit_injective ? "true" : "false") +
                       " image_open=" + std::string(l.image_open ? "true" : "false"));
    if (!ok && rep.hypotheses_met) {
      rep.hypotheses_met = false;
      rep.hypothesis_witness = {i};
      rep.hypothesis_witness.insert(rep.hypothesis_witness.end(), l.witness.begin(), l.witness.end());
    }
  }

  bool all_nilpotent = true;
  bool all_vanish = true;
  bool all_whole = true;
  for (std::size_t k = 0; k < t.depth(); ++k) {
    std::vector<Endomorphism> gens;
    for (const auto& fam : lambda) gens.push_back(fam.endos[k]);
    EndoSemigroup s(t.levels[k], gens);
    rep.o_lambda.push_back(o_lambda(s));
    all_nilpotent = all_nilpotent && rep.o_lambda.back().nilpotency.is_nilpotent;
    all_whole = all_whole && rep.o_lambda.back().subgroup.is_whole();
    bool vanish = false;
    for (const auto& m : generated_semigroup(s))
      if (image(m).is_trivial()) {
        vanish = true;
        break;
      }
    rep.iterate_vanishes.push_back(vanish);
    all_vanish = all_vanish && vanish;
  }

  if (!rep.hypotheses_met) return rep;
  rep.part_i = all_nilpotent ? Verdict::Pass : Verdict::Fail;
  rep.checks.add("o_lambda_nilpotent", all_nilpotent);
  if (all_vanish) {
    rep.part_ii = all_whole ? Verdict::Pass : Verdict::Fail;
    rep.checks.add("G_equals_o_lambda", all_whole);
  } else {
    rep.part_ii = Verdict::NotApplicable;
  }
  return rep;
}

TypeFProfile typeF_profile(const Tower& t, std::size_t n, std::size_t node_budget) {
  TypeFProfile out;
  for (const auto& g : t.levels) {
    out.levels.push_back(count_profile(g, n, node_budget));
    out.complete = out.complete && out.levels.back().complete;
  }
  const std::size_t d = out.levels.size();
  out.stabilized = d == 1 || out.levels[d - 1].counts == out.levels[d - 2].counts;
  return out;
}

}  // namespace pfg
