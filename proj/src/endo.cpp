#include "pfg/endo.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "pfg/catalog.hpp"

namespace pfg {

namespace {

using Map = std::vector<Elem>;

Endomorphism tail_of(const std::vector<Endomorphism>& gens) {
  // g_1 ∘ ... ∘ g_r applies g_r first.
  Endomorphism t = gens.back();
  for (std::size_t i = gens.size() - 1; i-- > 0;) t = t.then(gens[i]);
  return t;
}

Map compose_maps(const Map& first, const Map& second) {
  Map out(first.size());
  for (std::size_t x = 0; x < first.size(); ++x) out[x] = second[first[x]];
  return out;
}

std::string sizes(const Subgroup& a, const Subgroup& b) {
  return std::to_string(a.size()) + " vs " + std::to_string(b.size());
}

// First element of a not in b (for witnesses).
std::vector<std::uint64_t> difference_witness(const ElementMask& a, const ElementMask& b) {
  std::vector<std::uint64_t> w;
  a.for_each([&](Elem x) {
    if (w.empty() && !b.test(x)) w.push_back(x);
  });
  return w;
}

std::vector<std::uint64_t> symmetric_witness(const ElementMask& a, const ElementMask& b) {
  auto w = difference_witness(a, b);
  return w.empty() ? difference_witness(b, a) : w;
}

void check_equal(CheckRecord& rec, std::string name, const Subgroup& a, const Subgroup& b) {
  bool ok = a == b;
  rec.add(std::move(name), ok, sizes(a, b), ok ? std::vector<std::uint64_t>{} : symmetric_witness(a.mask(), b.mask()));
}

void check_normal(CheckRecord& rec, std::string name, const Subgroup& s) {
  const auto& g = *s.parent();
  std::vector<std::uint64_t> witness;
  s.mask().for_each([&](Elem x) {
    if (!witness.empty()) return;
    for (Elem t : g.generators())
      if (!s.contains(g.conj(t, x))) {
        witness = {t, x};
        return;
      }
  });
  rec.add(std::move(name), witness.empty(), "order " + std::to_string(s.size()), witness);
}

bool covers(const Subgroup& a, const Subgroup& b) { return product_set(a, b).count() == a.parent()->order(); }

Subgroup stabilized_kernel(const Endomorphism& phi) {
  auto cur = Endomorphism::identity(phi.group());
  auto k = kernel(cur);
  while (true) {
    cur = cur.then(phi);
    auto next = kernel(cur);
    if (next == k) return k;
    k = std::move(next);
  }
}

// Stable image of a subgroup under repeated application of phi.
Subgroup stable_image_of(const Endomorphism& phi, Subgroup s) {
  while (true) {
    auto next = image(phi, s);
    if (next == s) return s;
    s = std::move(next);
  }
}

struct SemigroupTable {
  std::vector<Map> maps;
  std::vector<std::vector<std::size_t>> left;  // left[m][i] = index of g_i ∘ maps[m]
};

SemigroupTable semigroup_table(const EndoSemigroup& lambda, std::size_t cap) {
  SemigroupTable t;
  std::map<Map, std::size_t> index;
  auto intern = [&](Map m) {
    auto [it, fresh] = index.emplace(std::move(m), t.maps.size());
    if (fresh) {
      if (t.maps.size() >= cap)
        fail(ErrorKind::SearchBudgetExceeded, "semigroup has more than " + std::to_string(cap) + " maps");
      t.maps.push_back(it->first);
    }
    return it->second;
  };
  const auto& gens = lambda.generators();
  for (const auto& g : gens) intern(Map(g.table().begin(), g.table().end()));
  for (std::size_t m = 0; m < t.maps.size(); ++m) {
    std::vector<std::size_t> row;
    for (const auto& g : gens) {
      Map gm(g.table().begin(), g.table().end());
      row.push_back(intern(compose_maps(t.maps[m], gm)));
    }
    t.left.push_back(std::move(row));
  }
  return t;
}

Subgroup filter_from_table(const EndoSemigroup& lambda, const SemigroupTable& t, const Subgroup& k) {
  const std::size_t s = t.maps.size();
  // Λξ is everything reachable from {g ∘ ξ} by left multiplication.
  std::vector<bool> core(s, true);
  for (std::size_t xi = 0; xi < s; ++xi) {
    std::vector<bool> reach(s, false);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < lambda.generators().size(); ++i) {
      auto m = t.left[xi][i];
      if (!reach[m]) {
        reach[m] = true;
        queue.push_back(m);
      }
    }
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (auto m : t.left[queue[h]])
        if (!reach[m]) {
          reach[m] = true;
          queue.push_back(m);
        }
    for (std::size_t m = 0; m < s; ++m) core[m] = core[m] && reach[m];
  }
  const auto& g = lambda.parent();
  ElementMask con(g->order());
  for (Elem x = 0; x < g->order(); ++x) {
    bool in = true;
    for (std::size_t m = 0; m < s && in; ++m)
      if (core[m]) in = k.contains(t.maps[m][x]);
    if (in) con.set(x);
  }
  return Subgroup::trusted(g, std::move(con));
}

}  // namespace

EndoSemigroup::EndoSemigroup(GroupPtr parent, std::vector<Endomorphism> generators)
    : parent_(std::move(parent)),
      generators_(std::move(generators)),
      tail_(generators_.empty() ? Endomorphism::identity(parent_) : tail_of(generators_)) {
  if (generators_.empty()) fail(ErrorKind::ParamOutOfRange, "a semigroup needs at least one generator");
  for (const auto& g : generators_)
    if (g.group() != parent_) fail(ErrorKind::DomainMismatch, "generator acts on a different group");
  for (std::size_t i = 0; i < generators_.size() && !noncommuting_; ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (!(generators_[i].then(generators_[j]) == generators_[j].then(generators_[i]))) {
        noncommuting_ = std::make_pair(i, j);
        break;
      }
}

ContractionReport contraction(const Endomorphism& phi) {
  const auto& g = phi.group();
  ContractionReport rep{Subgroup::trivial(g), Subgroup::whole(g), 0, {}, {}, {}};
  auto cur = Endomorphism::identity(g);
  rep.kernel_chain.push_back(kernel(cur));
  rep.image_chain.push_back(image(cur));
  while (true) {
    cur = cur.then(phi);
    auto k = kernel(cur);
    auto im = image(cur);
    if (k == rep.kernel_chain.back() && im == rep.image_chain.back()) break;
    rep.kernel_chain.push_back(std::move(k));
    rep.image_chain.push_back(std::move(im));
  }
  rep.depth = rep.kernel_chain.size() - 1;
  rep.con = rep.kernel_chain.back();
  rep.stable_image = rep.image_chain.back();

  ElementMask orbit(g->order());
  const std::size_t steps = 2 * g->order();
  for (Elem x = 0; x < g->order(); ++x) {
    Elem y = x;
    for (std::size_t s = 0; s < steps && y != 0; ++s) y = phi(y);
    if (y == 0) orbit.set(x);
  }
  bool agree = orbit == rep.con.mask();
  rep.checks.add("orbit_oracle", agree, "order " + std::to_string(rep.con.size()),
                 agree ? std::vector<std::uint64_t>{} : symmetric_witness(orbit, rep.con.mask()));
  return rep;
}

CheckRecord verify_theorem_A(const Endomorphism& phi) { return verify_theorem_A(phi, contraction(phi)); }

CheckRecord verify_theorem_A(const Endomorphism& phi, const ContractionReport& rep) {
  CheckRecord rec;
  const auto& con = rep.con;
  const auto& st = rep.stable_image;
  check_normal(rec, "con_normal", con);
  auto meet = intersect(con, st);
  rec.add("con_meet_stable_trivial", meet.is_trivial(), "order " + std::to_string(meet.size()),
          difference_witness(meet.mask(), Subgroup::trivial(con.parent()).mask()));
  rec.add("con_times_stable_is_G", covers(con, st),
          std::to_string(con.size()) + " * " + std::to_string(st.size()) + " / " + std::to_string(con.parent()->order()));
  check_equal(rec, "bijective_on_stable", image(phi, st), st);
  bool k_ok = true;
  std::vector<std::uint64_t> bad;
  auto power = Endomorphism::identity(phi.group());
  for (std::size_t k = 0; k <= rep.depth; ++k) {
    if (!(image(power, con) == intersect(con, rep.image_chain[k]))) {
      k_ok = false;
      bad = {k};
      break;
    }
    power = power.then(phi);
  }
  rec.add("power_image_of_con", k_ok, "k <= " + std::to_string(rep.depth), bad);
  return rec;
}

std::vector<Endomorphism> generated_semigroup(const EndoSemigroup& lambda, std::size_t cap) {
  auto t = semigroup_table(lambda, cap);
  std::vector<Endomorphism> out;
  for (auto& m : t.maps) out.push_back(Endomorphism(GroupHom::trusted(lambda.parent(), lambda.parent(), std::move(m))));
  return out;
}

Subgroup filter_contraction(const EndoSemigroup& lambda, const Subgroup& k, std::size_t cap) {
  if (k.parent() != lambda.parent()) fail(ErrorKind::KNotSubgroup, "K is not a subgroup of the semigroup's group");
  return filter_from_table(lambda, semigroup_table(lambda, cap), k);
}

ContractionReport semigroup_contraction(const EndoSemigroup& lambda) {
  return semigroup_contraction(lambda, Subgroup::trivial(lambda.parent()));
}

ContractionReport semigroup_contraction(const EndoSemigroup& lambda, const ElementMask& k) {
  const auto& g = lambda.parent();
  if (k.bits() != g->order() || !k.test(0)) fail(ErrorKind::KNotSubgroup, "K does not contain the identity");
  std::vector<std::uint64_t> w;
  k.for_each([&](Elem x) {
    if (!w.empty()) return;
    k.for_each([&](Elem y) {
      if (w.empty() && !k.test(g->mul(x, y))) w = {x, y};
    });
  });
  if (!w.empty()) fail(ErrorKind::KNotSubgroup, "K is not closed under multiplication", w);
  return semigroup_contraction(lambda, Subgroup::trusted(g, k));
}

ContractionReport semigroup_contraction(const EndoSemigroup& lambda, const Subgroup& k) {
  if (!lambda.commutative()) {
    auto [i, j] = *lambda.noncommuting_pair();
    fail(ErrorKind::NonCommutative, "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute",
         {i, j});
  }
  const auto& g = lambda.parent();
  if (k.parent() != g) fail(ErrorKind::KNotSubgroup, "K is not a subgroup of the semigroup's group");
  const auto& gens = lambda.generators();

  // B = {y : σ(y) ∈ K for every σ in Λ}, the greatest fixed point of
  // B -> {y : g_i(y) ∈ K ∩ B for all i}.
  ElementMask b = ElementMask::full(g->order());
  while (true) {
    ElementMask target = b & k.mask();
    ElementMask next(g->order());
    for (Elem y = 0; y < g->order(); ++y) {
      bool in = std::all_of(gens.begin(), gens.end(), [&](const Endomorphism& s) { return target.test(s(y)); });
      if (in) next.set(y);
    }
    if (next == b) break;
    b = std::move(next);
  }
  auto base = Subgroup::trusted(g, std::move(b));

  ContractionReport rep{Subgroup::trivial(g), Subgroup::whole(g), 0, {}, {}, {}};
  const auto& tau = lambda.tail();
  auto cur = Endomorphism::identity(g);
  rep.kernel_chain.push_back(base);
  rep.image_chain.push_back(Subgroup::whole(g));
  while (true) {
    cur = cur.then(tau);
    auto c = preimage(cur, base);
    auto im = image(cur);
    if (c == rep.kernel_chain.back() && im == rep.image_chain.back()) break;
    rep.kernel_chain.push_back(std::move(c));
    rep.image_chain.push_back(std::move(im));
  }
  rep.depth = rep.kernel_chain.size() - 1;
  rep.con = rep.kernel_chain.back();
  rep.stable_image = rep.image_chain.back();

  if (!is_normal(k)) {
    auto literal = filter_contraction(lambda, k);
    bool agree = literal == rep.con;
    rep.checks.add("tail_agrees_with_filter", agree, sizes(rep.con, literal),
                   agree ? std::vector<std::uint64_t>{} : symmetric_witness(rep.con.mask(), literal.mask()));
    if (!agree) rep.con = literal;
  }
  return rep;
}

CheckRecord verify_splitthm(const EndoSemigroup& lambda) {
  auto rep = semigroup_contraction(lambda);
  const auto& n = rep.con;
  const auto& h = rep.stable_image;
  CheckRecord rec;
  check_normal(rec, "con_normal", n);
  auto meet = intersect(n, h);
  rec.add("con_meet_stable_trivial", meet.is_trivial(), "order " + std::to_string(meet.size()));
  const auto& gens = lambda.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto im = image(gens[i]);
    auto tag = "[" + std::to_string(i) + "]";
    rec.add("con_times_image" + tag, covers(n, im), sizes(n, im));
    check_equal(rec, "con_meet_image" + tag, intersect(n, im), image(gens[i], n));
  }
  rec.add("con_times_stable_is_G", covers(n, h), sizes(n, h));
  for (std::size_t i = 0; i < gens.size(); ++i)
    check_equal(rec, "bijective_on_stable[" + std::to_string(i) + "]", image(gens[i], h), h);
  auto inner = stable_image_of(lambda.tail(), n);
  rec.add("stable_of_con_trivial", inner.is_trivial(), "order " + std::to_string(inner.size()));
  return rec;
}

OLambda o_lambda(const EndoSemigroup& lambda, std::size_t cap) {
  const auto& g = lambda.parent();
  ElementMask all(g->order());
  all.set(0);
  for (const auto& m : generated_semigroup(lambda, cap)) all |= stabilized_kernel(m).mask();
  auto s = closure(g, all.elements());
  auto nil = nilpotency(as_group(s).group);
  return {std::move(s), std::move(nil)};
}

CheckRecord shrinkind_check(const Endomorphism& phi, const Subgroup& k) {
  if (k.parent() != phi.group()) fail(ErrorKind::DomainMismatch, "K is not a subgroup of the endomorphism's group");
  CheckRecord rec;
  auto pre = preimage(phi, k);
  rec.add("index_inequality", pre.index() <= k.index(),
          std::to_string(pre.index()) + " <= " + std::to_string(k.index()));
  if (pre.index() == k.index()) {
    auto cover = product_set(image(phi), k);
    rec.add("equality_implies_coverage", cover.count() == phi.group()->order(),
            std::to_string(cover.count()) + " of " + std::to_string(phi.group()->order()),
            difference_witness(ElementMask::full(phi.group()->order()), cover));
  } else {
    rec.add("equality_implies_coverage", true, "strict inequality");
  }
  return rec;
}

HomEnumeration enumerate_homs(const GroupPtr& g, const GroupPtr& h, const HomSearchOptions& opts) {
  HomEnumeration out;
  const auto& src = *g;
  const auto& dst = *h;
  if (opts.injective_only && src.order() > dst.order()) return out;
  std::vector<Elem> gens(src.generators().begin(), src.generators().end());
  const Elem unset = static_cast<Elem>(dst.order());
  std::vector<Elem> images;

  // Extends generator images over the generated subgroup; every edge x -> xs
  // is checked, which makes the result a homomorphism on that subgroup.
  auto extend = [&](Map& map) {
    std::fill(map.begin(), map.end(), unset);
    map[0] = 0;
    std::vector<Elem> queue{0};
    ElementMask used(dst.order());
    used.set(0);
    const std::size_t j = images.size();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Elem x = queue[head];
      for (std::size_t i = 0; i < j; ++i) {
        Elem y = src.mul(x, gens[i]);
        Elem v = dst.mul(map[x], images[i]);
        if (map[y] == unset) {
          if (opts.injective_only) {
            if (used.test(v)) return false;
            used.set(v);
          }
          map[y] = v;
          queue.push_back(y);
        } else if (map[y] != v) {
          return false;
        }
      }
    }
    return true;
  };

  Map map(src.order());
  auto dfs = [&](auto&& self) -> bool {
    if (images.size() == gens.size()) {
      ++out.count;
      if (out.witnesses.size() < opts.witness_cap) out.witnesses.push_back(GroupHom::trusted(g, h, map));
      return opts.stop_after == 0 || out.count < opts.stop_after;
    }
    const std::size_t ord = src.element_order(gens[images.size()]);
    for (Elem y = 0; y < dst.order(); ++y) {
      const std::size_t oy = dst.element_order(y);
      if (opts.injective_only ? oy != ord : ord % oy != 0) continue;
      if (++out.nodes > opts.budget)
        fail(ErrorKind::SearchBudgetExceeded, "homomorphism search exceeded " + std::to_string(opts.budget) + " nodes");
      images.push_back(y);
      bool keep_going = true;
      if (extend(map)) keep_going = self(self);
      images.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  if (gens.empty()) {
    map.assign(src.order(), 0);
    out.count = 1;
    if (opts.witness_cap > 0) out.witnesses.push_back(GroupHom::trusted(g, h, map));
    return out;
  }
  dfs(dfs);
  return out;
}

HomSearchResult hom_search(const GroupPtr& g, const GroupPtr& h, const HomSearchOptions& opts) {
  auto e = enumerate_homs(g, h, opts);
  return {e.count, std::move(e.witnesses), e.nodes, std::nullopt};
}

HomSearchResult hom_search(const GroupPtr& g, const Subgroup& h, const HomSearchOptions& opts) {
  auto emb = as_group(h);
  auto e = enumerate_homs(g, emb.group, opts);
  HomSearchResult out{e.count, {}, e.nodes, std::nullopt};
  for (const auto& w : e.witnesses) out.witnesses.push_back(compose(w, emb.inclusion));
  if (out.count != 0 || h.parent() != g) return out;

  HomSearchOptions probe = opts;
  probe.witness_cap = 0;
  probe.stop_after = 1;
  auto embeddings_into = [&](const Subgroup& n) {
    auto r = enumerate_homs(g, as_group(n).group, probe);
    out.nodes += r.nodes;
    return r.count;
  };
  // Least index among proper normal subgroups that G does not embed into;
  // the core of H is always a candidate.
  auto normals = enumerate_normals(g);
  std::stable_sort(normals.begin(), normals.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.index() < b.index(); });
  std::optional<Subgroup> minimal;
  for (const auto& n : normals) {
    if (n.is_whole()) continue;
    if (embeddings_into(n) == 0) {
      minimal = n;
      break;
    }
  }
  if (!minimal) return out;
  for (const auto& k : maximal_normals(g)) {
    if (!minimal->subset_of(k)) continue;
    SimpleQuotientWitness w{*minimal, k, is_simple(quotient(k).group), 0};
    probe.stop_after = 0;
    w.embeddings_into_k = embeddings_into(k);
    out.simple_witness = std::move(w);
    break;
  }
  return out;
}

CheckRecord lambdareslem_check(const Subgroup& h, const PrimeSet& pi) {
  const auto& g = h.parent();
  auto c = core(h);
  for (auto p : prime_divisors(c.index()))
    if (!pi.count(p))
      fail(ErrorKind::PreconditionPrimes,
           "prime " + std::to_string(p) + " divides |G : core(H)| = " + std::to_string(c.index()) + " but is not in " +
               to_string(pi),
           {p});
  auto emb = as_group(h);
  auto oh = emb.lift(o_pi(emb.group, pi));
  auto og = o_pi(g, pi);
  CheckRecord rec;
  check_equal(rec, "o_pi_H_equals_o_pi_G", oh, og);
  return rec;
}

CheckRecord fewprimes_check(const GroupHom& phi, const PrimeSet& pi) {
  const auto& g = phi.domain();
  const auto& h = phi.codomain();
  if (!kernel(phi).is_trivial()) fail(ErrorKind::ParamOutOfRange, "homomorphism is not injective");
  auto img = image(phi);
  auto c = core(img);
  for (auto p : prime_divisors(c.index()))
    if (!pi.count(p))
      fail(ErrorKind::PreconditionPrimes,
           "prime " + std::to_string(p) + " divides |H : core(phi(G))| = " + std::to_string(c.index()) +
               " but is not in " + to_string(pi),
           {p});
  CheckRecord rec;
  auto og = o_pi(g, pi);
  auto oh = o_pi(h, pi);
  auto emb = as_group(img);
  check_equal(rec, "o_pi_image_equals_o_pi_H", emb.lift(o_pi(emb.group, pi)), oh);

  auto qg = quotient(og);
  auto qh = quotient(oh);
  const Elem unset = static_cast<Elem>(qh.group->order());
  Map psi(qg.group->order(), unset);
  std::vector<std::uint64_t> bad;
  for (Elem x = 0; x < g->order(); ++x) {
    Elem a = qg.projection(x);
    Elem b = qh.projection(phi(x));
    if (psi[a] == unset) psi[a] = b;
    else if (psi[a] != b && bad.empty()) bad = {x};
  }
  rec.add("well_defined", bad.empty(), "|G/O| = " + std::to_string(qg.group->order()), bad);
  if (!bad.empty()) return rec;

  ElementMask hit(qh.group->order());
  bool injective = true;
  for (Elem v : psi) {
    if (hit.test(v)) injective = false;
    hit.set(v);
  }
  rec.add("injective", injective);
  ElementMask expected(qh.group->order());
  product_set(img, oh).for_each([&](Elem y) { expected.set(qh.projection(y)); });
  bool same = hit == expected;
  rec.add("image", same, std::to_string(hit.count()) + " vs " + std::to_string(expected.count()),
          same ? std::vector<std::uint64_t>{} : symmetric_witness(hit, expected));
  return rec;
}

CheckRecord verify_regulation(const EndoSemigroup& lambda, const AutoSet& omega) {
  const auto& g = lambda.parent();
  if (omega.parent() != g) fail(ErrorKind::DomainMismatch, "automorphisms of a different group");
  const auto& gens = lambda.generators();
  const auto& maps = omega.maps();
  CheckRecord rec;

  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::set<Map> left, right;
    for (const auto& w : maps) {
      auto lw = w.then(gens[i]);
      auto wl = gens[i].then(w);
      left.emplace(lw.table().begin(), lw.table().end());
      right.emplace(wl.table().begin(), wl.table().end());
    }
    rec.add("a_commutes[" + std::to_string(i) + "]", left == right,
            maps.empty() ? "no automorphisms" : std::to_string(left.size()) + " composites");
  }

  auto family = invariant_normals(g, g->order(), omega);
  std::stable_sort(family.begin(), family.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.index() < b.index(); });
  // I_n^Ω only changes at the indices present in the family.
  std::vector<std::pair<std::size_t, Subgroup>> residuals;
  auto meet = Subgroup::whole(g);
  for (const auto& s : family) {
    meet = intersect(meet, s);
    if (!residuals.empty() && residuals.back().first == s.index()) residuals.back().second = meet;
    else residuals.emplace_back(s.index(), meet);
  }
  std::string profile;
  for (const auto& [n, s] : residuals) profile += (profile.empty() ? "" : ",") + std::to_string(n) + ":" + std::to_string(s.size());
  rec.add("b_open", true, "finite level; |I_n| at n = " + profile);

  std::optional<std::size_t> trivial_at;
  for (const auto& [n, s] : residuals)
    if (s.is_trivial()) {
      trivial_at = n;
      break;
    }
  rec.add("c_trivial_residual", trivial_at.has_value(), trivial_at ? "n = " + std::to_string(*trivial_at) : "none",
          trivial_at ? std::vector<std::uint64_t>{*trivial_at} : std::vector<std::uint64_t>{});

  bool stable = true;
  std::vector<std::uint64_t> bad;
  for (const auto& [n, s] : residuals)
    for (std::size_t i = 0; i < gens.size() && stable; ++i)
      if (!maps_into(gens[i], s)) {
        stable = false;
        bad = {n, i};
      }
  rec.add("residuals_lambda_invariant", stable, std::to_string(residuals.size()) + " residuals", bad);

  bool pre_ok = true;
  bad.clear();
  for (std::size_t f = 0; f < family.size() && pre_ok; ++f)
    for (std::size_t i = 0; i < gens.size() && pre_ok; ++i) {
      auto p = preimage(gens[i], family[f]);
      bool ok = p.index() <= family[f].index() && is_normal(p) &&
                std::all_of(maps.begin(), maps.end(), [&](const Endomorphism& w) { return maps_into(w, p); });
      if (!ok) {
        pre_ok = false;
        bad = {family[f].size(), i};
      }
    }
  rec.add("preimage_invariant_normal", pre_ok, std::to_string(family.size()) + " invariant normal subgroups", bad);
  return rec;
}

std::vector<Endomorphism> conjugation_action(const GroupPtr& g, const Embedded& n, const Subgroup& h) {
  std::vector<Endomorphism> out;
  for (Elem t : h.elements()) {
    auto c = restrict_to(conjugation(g, t), n);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

CheckRecord tfrelstab_ii_check(const EndoSemigroup& lambda, const AutoSet& omega) {
  const auto& g = lambda.parent();
  if (omega.parent() != g) fail(ErrorKind::DomainMismatch, "automorphisms of a different group");
  auto shape = g->structure().shape;
  if (shape != Shape::Semidirect && shape != Shape::Product)
    fail(ErrorKind::TypeMismatch, "group is not a semidirect product");
  auto n = coordinate_subgroup(g, 0);
  auto h = coordinate_subgroup(g, 1);

  auto require_invariant = [&](const Endomorphism& f, const Subgroup& s, const char* what) {
    std::vector<std::uint64_t> w;
    s.mask().for_each([&](Elem x) {
      if (w.empty() && !s.contains(f(x))) w = {x};
    });
    if (!w.empty()) fail(ErrorKind::NotInvariant, std::string(what) + " is not invariant", w);
  };
  for (const auto& f : lambda.generators()) {
    require_invariant(f, n, "N");
    require_invariant(f, h, "H");
    if (!(image(f, h) == h)) fail(ErrorKind::NotSurjectiveOnH, "a generator is not surjective on H");
  }
  for (const auto& w : omega.maps()) {
    require_invariant(w, n, "N");
    require_invariant(w, h, "H");
  }

  auto emb = as_group(n);
  std::vector<Endomorphism> restricted;
  for (const auto& f : lambda.generators()) restricted.push_back(restrict_to(f, emb));
  auto xi = conjugation_action(g, emb, h);
  const std::size_t psi = xi.size();
  for (const auto& w : omega.maps()) {
    auto r = restrict_to(w, emb);
    if (std::find(xi.begin(), xi.end(), r) == xi.end()) xi.push_back(std::move(r));
  }
  CheckRecord rec;
  rec.add("xi_built", true, "|Psi| = " + std::to_string(psi) + ", |Xi| = " + std::to_string(xi.size()));
  rec.append(verify_regulation(EndoSemigroup(emb.group, std::move(restricted)), AutoSet(emb.group, std::move(xi))),
             "N.");
  return rec;
}

}  // namespace pfg
