#include "pfg/lattice.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "pfg/group_ops.hpp"

namespace pfg {

namespace {

struct Node {
  ElementMask mask;
  std::vector<Elem> gens;
};

// Joins of prime-power cyclic subgroups reach every subgroup, since each
// element is a product of commuting prime-power-order powers of itself.
SubgroupCatalog full_lattice(const GroupPtr& g, std::size_t budget) {
  const auto& grp = *g;
  SubgroupCatalog cat;
  cat.parent = g;
  cat.max_index = grp.order();

  std::vector<Node> nodes;
  std::unordered_map<ElementMask, std::size_t, ElementMaskHash> seen;
  auto add = [&](ElementMask m, std::vector<Elem> gens) {
    if (seen.count(m)) return;
    seen.emplace(m, nodes.size());
    nodes.push_back({std::move(m), std::move(gens)});
  };

  ElementMask trivial(grp.order());
  trivial.set(0);
  add(trivial, {});
  std::vector<Elem> atoms;
  for (Elem x = 1; x < grp.order(); ++x) {
    if (prime_divisors(grp.element_order(x)).size() != 1) continue;
    ElementMask m(grp.order());
    for (Elem y = x; y != 0; y = grp.mul(y, x)) m.set(y);
    m.set(0);
    if (seen.count(m)) continue;
    atoms.push_back(x);
    add(std::move(m), {x});
  }

  std::size_t steps = 0;
  for (std::size_t i = 0; i < nodes.size() && cat.complete; ++i) {
    for (Elem a : atoms) {
      if (nodes[i].mask.test(a)) continue;
      ElementMask m = nodes[i].mask;
      auto gens = nodes[i].gens;
      gens.push_back(a);
      auto queue = m.elements();
      for (std::size_t head = 0; head < queue.size(); ++head) {
        for (Elem s : gens) {
          Elem y = grp.mul(queue[head], s);
          ++steps;
          if (!m.test(y)) {
            m.set(y);
            queue.push_back(y);
          }
        }
      }
      if (steps > budget) {
        cat.complete = false;
        break;
      }
      add(std::move(m), std::move(gens));
    }
  }
  cat.steps = steps;
  for (auto& n : nodes) cat.entries.push_back(Subgroup::trusted(g, std::move(n.mask)));
  std::sort(cat.entries.begin(), cat.entries.end(), canonical_less);
  return cat;
}

std::size_t factorial_capped(std::size_t n, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    f *= k;
    if (f > cap) return cap + 1;
  }
  return f;
}

}  // namespace

AutoSet::AutoSet(GroupPtr parent, std::vector<Endomorphism> maps) : parent_(std::move(parent)) {
  for (auto& m : maps) {
    if (m.group() != parent_) fail(ErrorKind::DomainMismatch, "automorphism of a different group");
    if (!m.is_automorphism()) fail(ErrorKind::NotAHomomorphism, "map in an automorphism set is not bijective");
    if (std::find(maps_.begin(), maps_.end(), m) == maps_.end()) maps_.push_back(std::move(m));
  }
}

SubgroupCatalog enumerate_subgroups(const GroupPtr& g, std::size_t max_index, std::size_t node_budget) {
  if (max_index < 1) fail(ErrorKind::ParamOutOfRange, "index bound must be >= 1");
  const std::size_t n = g->order();
  SubgroupCatalog cat;
  // Every subgroup of index <= k has a core of index <= k!, hence contains
  // I_{k!}; enumerating in G / I_{k!} and lifting is exact.
  const std::size_t fact = factorial_capped(max_index, n);
  if (max_index < n && fact < n) {
    auto r = residual_intersection(g, fact);
    if (!r.is_trivial()) {
      auto q = quotient(r);
      auto small = full_lattice(q.group, node_budget);
      cat.parent = g;
      cat.complete = small.complete;
      cat.steps = small.steps;
      for (const auto& s : small.entries)
        if (s.index() <= max_index) cat.entries.push_back(preimage(q.projection, s));
      std::sort(cat.entries.begin(), cat.entries.end(), canonical_less);
      cat.max_index = max_index;
      return cat;
    }
  }
  cat = full_lattice(g, node_budget);
  std::erase_if(cat.entries, [&](const Subgroup& s) { return s.index() > max_index; });
  cat.max_index = max_index;
  return cat;
}

std::vector<Subgroup> enumerate_normals(const GroupPtr& g) {
  const auto& grp = *g;
  std::vector<Node> nodes;
  std::unordered_set<ElementMask, ElementMaskHash> seen;
  auto add = [&](const Subgroup& s) {
    if (!seen.insert(s.mask()).second) return false;
    nodes.push_back({s.mask(), small_generating_set(s)});
    return true;
  };

  add(Subgroup::trivial(g));
  // Normal closures of the conjugacy classes are the join-irreducible atoms.
  ElementMask classified(grp.order());
  std::vector<std::size_t> atoms;
  for (Elem x = 0; x < grp.order(); ++x) {
    if (classified.test(x)) continue;
    std::vector<Elem> cls{x};
    classified.set(x);
    for (std::size_t h = 0; h < cls.size(); ++h)
      for (Elem t : grp.generators()) {
        Elem y = grp.conj(t, cls[h]);
        if (!classified.test(y)) {
          classified.set(y);
          cls.push_back(y);
        }
      }
    auto ncl = normal_closure(closure(g, std::span<const Elem>(&x, 1)));
    if (add(ncl)) atoms.push_back(nodes.size() - 1);
  }

  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t a : atoms) {
      if (nodes[a].mask.subset_of(nodes[i].mask)) continue;
      auto gens = nodes[i].gens;
      gens.insert(gens.end(), nodes[a].gens.begin(), nodes[a].gens.end());
      add(closure(g, gens));
    }
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t count = nodes.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        grew |= add(Subgroup::trusted(g, nodes[i].mask & nodes[j].mask));
  }

  std::vector<Subgroup> out;
  for (auto& n : nodes) out.push_back(Subgroup::trusted(g, std::move(n.mask)));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Subgroup> invariant_normals(const GroupPtr& g, std::size_t n, const AutoSet& omega) {
  if (!omega.empty() && omega.parent() != g) fail(ErrorKind::DomainMismatch, "automorphisms of a different group");
  std::vector<Subgroup> out;
  for (auto& s : enumerate_normals(g)) {
    if (s.index() > n) continue;
    bool inv = std::all_of(omega.maps().begin(), omega.maps().end(),
                           [&](const Endomorphism& w) { return is_setwise_invariant(w, s); });
    if (inv) out.push_back(std::move(s));
  }
  return out;
}

Subgroup residual_intersection(const GroupPtr& g, std::size_t n, const AutoSet& omega) {
  if (n < 1) fail(ErrorKind::ParamOutOfRange, "index bound must be >= 1");
  auto meet = Subgroup::whole(g);
  for (const auto& s : invariant_normals(g, n, omega)) meet = intersect(meet, s);
  return meet;
}

Subgroup residual_intersection(const GroupPtr& g, std::size_t n) { return residual_intersection(g, n, AutoSet(g)); }

Subgroup o_pi(const GroupPtr& g, const PrimeSet& pi) {
  if (pi.empty()) fail(ErrorKind::ParamOutOfRange, "prime set must be non-empty");
  for (auto p : pi)
    if (!is_prime(p)) fail(ErrorKind::ParamOutOfRange, std::to_string(p) + " is not prime");
  auto meet = Subgroup::whole(g);
  for (const auto& s : enumerate_normals(g))
    if (is_pi_number(s.index(), pi)) meet = intersect(meet, s);
  return meet;
}

CountProfile count_profile(const GroupPtr& g, std::size_t n, std::size_t node_budget) {
  auto cat = enumerate_subgroups(g, n, node_budget);
  CountProfile out;
  out.complete = cat.complete;
  for (const auto& s : cat.entries) ++out.counts[s.index()];
  return out;
}

std::vector<Subgroup> maximal_normals(const GroupPtr& g) {
  auto normals = enumerate_normals(g);
  std::vector<Subgroup> out;
  for (const auto& k : normals) {
    if (k.is_whole()) continue;
    bool maximal = std::none_of(normals.begin(), normals.end(), [&](const Subgroup& m) {
      return !m.is_whole() && m.size() > k.size() && k.subset_of(m);
    });
    if (maximal) out.push_back(k);
  }
  return out;
}

bool is_simple(const GroupPtr& g) { return enumerate_normals(g).size() == 2; }

}  // namespace pfg
