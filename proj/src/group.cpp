#include "pfg/group.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>
#include <random>

namespace pfg {

namespace {

std::atomic<std::size_t> g_order_guard{kDefaultOrderGuard};

std::string triple_text(Elem a, Elem b, Elem c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

// Closure of gens under right multiplication; only relies on the table, so
// it is usable before associativity has been established.
ElementMask right_closure(const std::vector<Elem>& table, std::size_t n, const std::vector<Elem>& gens) {
  ElementMask seen(n);
  std::vector<Elem> queue{0};
  seen.set(0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (Elem g : gens) {
      Elem y = table[static_cast<std::size_t>(x) * n + g];
      if (!seen.test(y)) {
        seen.set(y);
        queue.push_back(y);
      }
    }
  }
  return seen;
}

// Greedy generating set: scan candidates in the given priority order and keep
// each one that is not yet generated.
std::vector<Elem> greedy_generators(const std::vector<Elem>& table, std::size_t n,
                                    const std::vector<Elem>& priority) {
  std::vector<Elem> gens;
  ElementMask span = right_closure(table, n, gens);
  for (Elem x : priority) {
    if (span.test(x)) continue;
    gens.push_back(x);
    span = right_closure(table, n, gens);
    if (span.count() == n) break;
  }
  return gens;
}

void check_associativity(const std::vector<Elem>& table, std::size_t n) {
  auto m = [&](Elem a, Elem b) { return table[static_cast<std::size_t>(a) * n + b]; };
  if (n < kFullAssociativityScanBelow) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        Elem ab = m(a, b);
        for (Elem c = 0; c < n; ++c)
          if (m(ab, c) != m(a, m(b, c)))
            fail(ErrorKind::NotAssociative, "(xy)z != x(yz) at " + triple_text(a, b, c), {a, b, c});
      }
    return;
  }
  // Randomized spot check, then the generator test: the set of g with
  // (xg)y = x(gy) for all x, y is closed under products, so checking it on a
  // generating set settles associativity exactly.
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
  for (int i = 0; i < 100000; ++i) {
    Elem a = pick(rng), b = pick(rng), c = pick(rng);
    if (m(m(a, b), c) != m(a, m(b, c)))
      fail(ErrorKind::NotAssociative, "(xy)z != x(yz) at " + triple_text(a, b, c), {a, b, c});
  }
  std::vector<Elem> order(n);
  std::iota(order.begin(), order.end(), Elem{0});
  auto gens = greedy_generators(table, n, order);
  if (right_closure(table, n, gens).count() != n)
    fail(ErrorKind::NotAssociative, "table is not generated by its elements under right products");
  for (Elem g : gens)
    for (Elem x = 0; x < n; ++x) {
      Elem xg = m(x, g);
      for (Elem y = 0; y < n; ++y)
        if (m(xg, y) != m(x, m(g, y)))
          fail(ErrorKind::NotAssociative, "(xg)y != x(gy) at " + triple_text(x, g, y), {x, g, y});
    }
}

}  // namespace

std::size_t order_guard() { return g_order_guard.load(); }
void set_order_guard(std::size_t max_order) { g_order_guard.store(max_order); }

Elem FiniteGroup::pow(Elem x, std::int64_t k) const {
  if (k < 0) {
    x = inv(x);
    k = -k;
  }
  Elem result = 0;
  Elem base = x;
  auto e = static_cast<std::uint64_t>(k) % element_order_[x];
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool FiniteGroup::is_abelian() const {
  for (Elem a = 0; a < order_; ++a)
    for (Elem b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::pair<Elem, Elem> FiniteGroup::coordinates(Elem x) const {
  if (structure_.factors.size() != 2)
    fail(ErrorKind::TypeMismatch, "group '" + label_ + "' has no coordinate structure");
  auto n0 = static_cast<Elem>(structure_.factors[0]->order());
  return {x % n0, x / n0};
}

Elem FiniteGroup::from_coordinates(Elem a, Elem b) const {
  if (structure_.factors.size() != 2)
    fail(ErrorKind::TypeMismatch, "group '" + label_ + "' has no coordinate structure");
  return a + static_cast<Elem>(structure_.factors[0]->order()) * b;
}

GroupPtr FiniteGroup::make(std::vector<Elem> table, std::size_t n, std::string label, Structure structure,
                           std::vector<Elem> generators, std::vector<std::string> names) {
  if (n == 0) fail(ErrorKind::BadTable, "empty table");
  if (n > order_guard())
    fail(ErrorKind::OrderGuard, "order " + std::to_string(n) + " exceeds guard " + std::to_string(order_guard()),
         {n});
  if (table.size() != n * n) fail(ErrorKind::BadTable, "table is not square");
  for (auto v : table)
    if (v >= n) fail(ErrorKind::BadTable, "entry " + std::to_string(v) + " out of range");
  for (Elem x = 0; x < n; ++x)
    if (table[x] != x || table[static_cast<std::size_t>(x) * n] != x)
      fail(ErrorKind::NoIdentity, "index 0 is not a two-sided identity (fails at " + std::to_string(x) + ")", {x});

  check_associativity(table, n);

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = n;
  g->inverse_.assign(n, 0);
  for (Elem x = 0; x < n; ++x) {
    const Elem* row = table.data() + static_cast<std::size_t>(x) * n;
    auto it = std::find(row, row + n, Elem{0});
    if (it == row + n || table[static_cast<std::size_t>(it - row) * n + x] != 0)
      fail(ErrorKind::MissingInverse, "element " + std::to_string(x) + " has no two-sided inverse", {x});
    g->inverse_[x] = static_cast<Elem>(it - row);
  }
  g->element_order_.assign(n, 1);
  for (Elem x = 1; x < n; ++x) {
    std::size_t k = 1;
    for (Elem y = x; y != 0; y = table[static_cast<std::size_t>(y) * n + x]) ++k;
    g->element_order_[x] = k;
  }
  g->table_ = std::move(table);

  if (generators.empty() && n > 1) {
    std::vector<Elem> priority(n);
    std::iota(priority.begin(), priority.end(), Elem{0});
    std::stable_sort(priority.begin(), priority.end(),
                     [&](Elem a, Elem b) { return g->element_order_[a] > g->element_order_[b]; });
    generators = greedy_generators(g->table_, n, priority);
  }
  g->generators_ = std::move(generators);
  if (names.empty()) {
    names.reserve(n);
    for (std::size_t x = 0; x < n; ++x) names.push_back(std::to_string(x));
  }
  g->names_ = std::move(names);
  g->label_ = std::move(label);
  g->structure_ = std::move(structure);
  return g;
}

GroupPtr build_from_table(const std::vector<std::vector<Elem>>& rows, std::string label) {
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorKind::BadTable, "empty table");
  for (const auto& r : rows) {
    if (r.size() != n) fail(ErrorKind::BadTable, "table is not square");
    for (auto v : r)
      if (v >= n) fail(ErrorKind::BadTable, "entry " + std::to_string(v) + " out of range");
  }
  std::optional<Elem> e;
  for (Elem c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x) ok = rows[c][x] == x && rows[x][c] == x;
    if (ok) e = c;
  }
  if (!e) fail(ErrorKind::NoIdentity, "no two-sided identity element");

  // Swap e and 0; the relabelling is an involution.
  auto relabel = [&](Elem x) -> Elem { return x == *e ? 0 : (x == 0 ? *e : x); };
  std::vector<Elem> table(n * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]);
  std::vector<std::string> names;
  for (Elem x = 0; x < n; ++x) names.push_back(std::to_string(relabel(x)));
  try {
    return FiniteGroup::make(std::move(table), n, std::move(label), {}, {}, std::move(names));
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::NotAssociative && err.kind() != ErrorKind::MissingInverse) throw;
    std::vector<std::uint64_t> original;
    for (auto w : err.witness()) original.push_back(relabel(static_cast<Elem>(w)));
    std::string msg = err.kind() == ErrorKind::NotAssociative ? "(xy)z != x(yz) at input triple"
                                                              : "no two-sided inverse for input element";
    for (auto w : original) msg += " " + std::to_string(w);
    fail(err.kind(), msg, std::move(original));
  }
}

Subgroup::Subgroup(GroupPtr parent, ElementMask members) {
  if (members.bits() != parent->order())
    fail(ErrorKind::NotASubgroup, "mask width does not match the parent order");
  if (!members.test(0)) fail(ErrorKind::NotASubgroup, "identity missing");
  auto elems = members.elements();
  for (Elem a : elems)
    for (Elem b : elems)
      if (!members.test(parent->mul(a, b)))
        fail(ErrorKind::NotASubgroup,
             "not closed: " + std::to_string(a) + "*" + std::to_string(b) + " outside the set", {a, b});
  parent_ = std::move(parent);
  size_ = elems.size();
  members_ = std::move(members);
}

Subgroup::Subgroup(Trusted, GroupPtr parent, ElementMask members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  size_ = members_.count();
}

Subgroup Subgroup::trivial(GroupPtr parent) {
  ElementMask m(parent->order());
  m.set(0);
  return Subgroup(Trusted{}, std::move(parent), std::move(m));
}

Subgroup Subgroup::whole(GroupPtr parent) {
  auto m = ElementMask::full(parent->order());
  return Subgroup(Trusted{}, std::move(parent), std::move(m));
}

Subgroup Subgroup::trusted(GroupPtr parent, ElementMask members) {
  return Subgroup(Trusted{}, std::move(parent), std::move(members));
}

bool canonical_less(const Subgroup& a, const Subgroup& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.elements() < b.elements();
}

GroupHom::GroupHom(GroupPtr domain, GroupPtr codomain, std::vector<Elem> map)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), map_(std::move(map)) {
  const auto n = domain_->order();
  if (map_.size() != n) fail(ErrorKind::NotAHomomorphism, "map is not total on the domain");
  for (auto v : map_)
    if (v >= codomain_->order()) fail(ErrorKind::NotAHomomorphism, "image index out of range");
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (map_[domain_->mul(x, y)] != codomain_->mul(map_[x], map_[y]))
        fail(ErrorKind::NotAHomomorphism,
             "f(xy) != f(x)f(y) for x=" + std::to_string(x) + ", y=" + std::to_string(y), {x, y});
}

GroupHom GroupHom::trusted(GroupPtr domain, GroupPtr codomain, std::vector<Elem> map) {
  return GroupHom(Trusted{}, std::move(domain), std::move(codomain), std::move(map));
}

GroupHom GroupHom::identity(const GroupPtr& g) {
  std::vector<Elem> map(g->order());
  std::iota(map.begin(), map.end(), Elem{0});
  return GroupHom(Trusted{}, g, g, std::move(map));
}

GroupHom GroupHom::trivial(GroupPtr domain, GroupPtr codomain) {
  std::vector<Elem> map(domain->order(), 0);
  return GroupHom(Trusted{}, std::move(domain), std::move(codomain), std::move(map));
}

Endomorphism::Endomorphism(GroupHom hom) : GroupHom(std::move(hom)) {
  if (!is_endomorphism())
    fail(ErrorKind::DomainMismatch, "endomorphism needs domain and codomain to be the same group");
}

Endomorphism Endomorphism::then(const Endomorphism& next) const {
  if (next.group() != group()) fail(ErrorKind::DomainMismatch, "composing endomorphisms of different groups");
  std::vector<Elem> map(group()->order());
  for (Elem x = 0; x < map.size(); ++x) map[x] = next((*this)(x));
  return Endomorphism(GroupHom::trusted(group(), group(), std::move(map)));
}

Endomorphism Endomorphism::power(std::size_t k) const {
  Endomorphism result = identity(group());
  Endomorphism base = *this;
  while (k) {
    if (k & 1) result = result.then(base);
    base = base.then(base);
    k >>= 1;
  }
  return result;
}

bool Endomorphism::is_automorphism() const {
  ElementMask hit(group()->order());
  for (auto v : table()) hit.set(v);
  return hit.count() == group()->order();
}

}  // namespace pfg
