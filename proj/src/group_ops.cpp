#include "pfg/group_ops.hpp"

#include <algorithm>

namespace pfg {

namespace {

void same_parent(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent()) fail(ErrorKind::DifferentParents, "subgroups live in different groups");
}

// Saturates `seed` (already containing the identity) under right products
// with gens.
ElementMask saturate(const FiniteGroup& g, ElementMask seed, std::span<const Elem> gens) {
  auto queue = seed.elements();
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (Elem s : gens) {
      Elem y = g.mul(x, s);
      if (!seed.test(y)) {
        seed.set(y);
        queue.push_back(y);
      }
    }
  }
  return seed;
}

}  // namespace

Subgroup closure(const GroupPtr& g, std::span<const Elem> gens) {
  ElementMask m(g->order());
  m.set(0);
  return Subgroup::trusted(g, saturate(*g, std::move(m), gens));
}

std::vector<Elem> small_generating_set(const Subgroup& s) {
  const auto& g = *s.parent();
  std::vector<Elem> gens;
  ElementMask span(g.order());
  span.set(0);
  s.mask().for_each([&](Elem x) {
    if (span.test(x)) return;
    gens.push_back(x);
    // Extending a subgroup by x: saturate the old span under all generators.
    span = saturate(g, std::move(span), gens);
  });
  return gens;
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
  same_parent(a, b);
  auto gens = small_generating_set(a);
  auto more = small_generating_set(b);
  gens.insert(gens.end(), more.begin(), more.end());
  return closure(a.parent(), gens);
}

bool is_normal(const Subgroup& s) {
  const auto& g = *s.parent();
  bool ok = true;
  s.mask().for_each([&](Elem x) {
    if (!ok) return;
    for (Elem t : g.generators())
      if (!s.contains(g.conj(t, x))) {
        ok = false;
        return;
      }
  });
  return ok;
}

Subgroup normal_closure(const Subgroup& s) {
  const auto& g = *s.parent();
  // Union of the conjugacy classes meeting S, then its closure.
  ElementMask classes = s.mask();
  auto queue = classes.elements();
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (Elem t : g.generators()) {
      Elem y = g.conj(t, x);
      if (!classes.test(y)) {
        classes.set(y);
        queue.push_back(y);
      }
    }
  }
  return closure(s.parent(), queue);
}

Subgroup core(const Subgroup& s) {
  const auto& g = *s.parent();
  ElementMask m = s.mask();
  // x is in the core iff t^-1 x t lies in S for every t.
  for (Elem t = 0; t < g.order(); ++t) {
    Elem ti = g.inv(t);
    m.for_each([&](Elem x) {
      if (!s.contains(g.conj(ti, x))) m.reset(x);
    });
  }
  return Subgroup::trusted(s.parent(), std::move(m));
}

NormalityInfo normality_ops(const Subgroup& s) { return {is_normal(s), normal_closure(s), core(s)}; }

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  same_parent(a, b);
  return Subgroup::trusted(a.parent(), a.mask() & b.mask());
}

ElementMask product_set(const Subgroup& a, const Subgroup& b) {
  same_parent(a, b);
  const auto& g = *a.parent();
  ElementMask out(g.order());
  auto bs = b.elements();
  a.mask().for_each([&](Elem x) {
    for (Elem y : bs) out.set(g.mul(x, y));
  });
  return out;
}

SubgroupAlgebra subgroup_algebra(const Subgroup& a, const Subgroup& b) {
  auto meet = intersect(a, b);
  auto prod = product_set(a, b);
  auto gen = prod.elements();
  bool closed = closure(a.parent(), gen).mask() == prod;
  bool covers = prod.count() == a.parent()->order();
  return {std::move(meet), std::move(prod), closed, covers};
}

Quotient quotient(const Subgroup& n) {
  if (!is_normal(n)) fail(ErrorKind::NotNormal, "quotient needs a normal subgroup");
  const auto& g = n.parent();
  const Elem none = static_cast<Elem>(g->order());
  std::vector<Elem> coset_of(g->order(), none);
  std::vector<Elem> reps;
  auto members = n.elements();
  for (Elem x = 0; x < g->order(); ++x) {
    if (coset_of[x] != none) continue;
    auto id = static_cast<Elem>(reps.size());
    reps.push_back(x);
    for (Elem k : members) coset_of[g->mul(x, k)] = id;
  }
  const std::size_t q = reps.size();
  std::vector<Elem> table(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) table[a * q + b] = coset_of[g->mul(reps[a], reps[b])];
  std::vector<std::string> names;
  for (Elem r : reps) names.push_back(g->element_name(r) + "N");
  auto qg = FiniteGroup::make(std::move(table), q, g->label() + " / N" + std::to_string(n.size()), {}, {},
                              std::move(names));
  return {qg, GroupHom::trusted(g, qg, std::move(coset_of))};
}

Subgroup kernel(const GroupHom& f) {
  ElementMask m(f.domain()->order());
  for (Elem x = 0; x < f.domain()->order(); ++x)
    if (f(x) == 0) m.set(x);
  return Subgroup::trusted(f.domain(), std::move(m));
}

Subgroup image(const GroupHom& f) {
  ElementMask m(f.codomain()->order());
  for (auto v : f.table()) m.set(v);
  return Subgroup::trusted(f.codomain(), std::move(m));
}

Subgroup image(const GroupHom& f, const Subgroup& s) {
  if (s.parent() != f.domain()) fail(ErrorKind::DomainMismatch, "subgroup is not in the domain");
  ElementMask m(f.codomain()->order());
  s.mask().for_each([&](Elem x) { m.set(f(x)); });
  return Subgroup::trusted(f.codomain(), std::move(m));
}

HomParts hom_parts(const GroupHom& f) {
  auto k = kernel(f);
  auto im = image(f);
  bool inj = k.is_trivial();
  bool sur = im.is_whole();
  return {std::move(k), std::move(im), inj, sur};
}

GroupHom compose(const GroupHom& f, const GroupHom& g) {
  if (f.codomain() != g.domain()) fail(ErrorKind::DomainMismatch, "codomain of f is not the domain of g");
  std::vector<Elem> map(f.domain()->order());
  for (Elem x = 0; x < map.size(); ++x) map[x] = g(f(x));
  return GroupHom::trusted(f.domain(), g.codomain(), std::move(map));
}

Subgroup preimage(const GroupHom& f, const Subgroup& s) {
  if (s.parent() != f.codomain()) fail(ErrorKind::DomainMismatch, "subgroup is not in the codomain");
  ElementMask m(f.domain()->order());
  for (Elem x = 0; x < f.domain()->order(); ++x)
    if (s.contains(f(x))) m.set(x);
  return Subgroup::trusted(f.domain(), std::move(m));
}

bool maps_into(const GroupHom& f, const Subgroup& s) {
  bool ok = true;
  s.mask().for_each([&](Elem x) { ok = ok && s.contains(f(x)); });
  return ok;
}

bool is_setwise_invariant(const GroupHom& f, const Subgroup& s) {
  return f.is_endomorphism() && image(f, s) == s;
}

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b) {
  same_parent(a, b);
  const auto& g = *a.parent();
  std::vector<Elem> comms;
  ElementMask seen(g.order());
  auto comm = [&](Elem x, Elem y) { return g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)); };
  if (is_normal(a) && is_normal(b)) {
    // For normal A, B: [A, B] is the normal closure of the commutators of
    // their generators.
    auto ga = small_generating_set(a);
    auto gb = small_generating_set(b);
    for (Elem x : ga)
      for (Elem y : gb) {
        Elem c = comm(x, y);
        if (!seen.test(c)) {
          seen.set(c);
          comms.push_back(c);
        }
      }
    return normal_closure(closure(a.parent(), comms));
  }
  auto bs = b.elements();
  a.mask().for_each([&](Elem x) {
    for (Elem y : bs) {
      Elem c = comm(x, y);
      if (!seen.test(c)) {
        seen.set(c);
        comms.push_back(c);
      }
    }
  });
  return closure(a.parent(), comms);
}

Nilpotency nilpotency(const GroupPtr& g) {
  Nilpotency out{false, std::nullopt, {}, {}, false};
  auto whole = Subgroup::whole(g);
  out.lower_central_series.push_back(whole);
  while (true) {
    auto next = commutator_subgroup(out.lower_central_series.back(), whole);
    if (next == out.lower_central_series.back()) break;
    out.lower_central_series.push_back(std::move(next));
  }
  out.is_nilpotent = out.lower_central_series.back().is_trivial();
  if (out.is_nilpotent) out.nilpotency_class = out.lower_central_series.size() - 1;

  out.derived_series.push_back(whole);
  while (true) {
    const auto& d = out.derived_series.back();
    auto next = commutator_subgroup(d, d);
    if (next == d) break;
    out.derived_series.push_back(std::move(next));
  }
  out.is_solvable = out.derived_series.back().is_trivial();
  return out;
}

Subgroup Embedded::lift(const Subgroup& local_subgroup) const { return image(inclusion, local_subgroup); }

Subgroup Embedded::localize(const Subgroup& parent_subgroup) const {
  return preimage(inclusion, parent_subgroup);
}

Embedded as_group(const Subgroup& s) {
  const auto& g = *s.parent();
  auto elems = s.elements();
  const std::size_t n = elems.size();
  std::vector<Elem> local(g.order(), static_cast<Elem>(n));
  for (std::size_t i = 0; i < n; ++i) local[elems[i]] = static_cast<Elem>(i);
  std::vector<Elem> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = local[g.mul(elems[a], elems[b])];
  std::vector<std::string> names;
  for (Elem x : elems) names.push_back(g.element_name(x));
  auto sub = FiniteGroup::make(std::move(table), n, g.label() + " >= H" + std::to_string(n), {}, {},
                               std::move(names));
  return {sub, GroupHom::trusted(sub, s.parent(), elems), std::move(local)};
}

Endomorphism restrict_to(const Endomorphism& f, const Embedded& s) {
  if (f.group() != s.inclusion.codomain()) fail(ErrorKind::DomainMismatch, "restriction to a foreign subgroup");
  const auto& sub = s.group;
  std::vector<Elem> map(sub->order());
  for (Elem x = 0; x < sub->order(); ++x) {
    Elem y = s.local(f(s.inclusion(x)));
    if (y >= sub->order())
      fail(ErrorKind::NotInvariant, "map leaves the subgroup at element " + std::to_string(s.inclusion(x)),
           {s.inclusion(x)});
    map[x] = y;
  }
  return Endomorphism(GroupHom::trusted(sub, sub, std::move(map)));
}

Endomorphism conjugation(const GroupPtr& g, Elem by) {
  std::vector<Elem> map(g->order());
  for (Elem x = 0; x < g->order(); ++x) map[x] = g->conj(by, x);
  return Endomorphism(GroupHom::trusted(g, g, std::move(map)));
}

}  // namespace pfg
