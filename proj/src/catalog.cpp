#include "pfg/catalog.hpp"

#include <algorithm>
#include <numeric>

#include "pfg/numbers.hpp"

namespace pfg {

namespace {

void guard(std::uint64_t n) {
  if (n > order_guard())
    fail(ErrorKind::OrderGuard,
         "order " + std::to_string(n) + " exceeds guard " + std::to_string(order_guard()), {n});
}

std::vector<Elem> compose_maps(const std::vector<Elem>& outer, const std::vector<Elem>& inner) {
  std::vector<Elem> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

std::vector<Elem> identity_map(std::size_t n) {
  std::vector<Elem> m(n);
  std::iota(m.begin(), m.end(), Elem{0});
  return m;
}

bool is_automorphism_map(const FiniteGroup& n, const std::vector<Elem>& f) {
  if (f.size() != n.order()) return false;
  ElementMask hit(n.order());
  for (auto v : f) {
    if (v >= n.order()) return false;
    hit.set(v);
  }
  if (hit.count() != n.order()) return false;
  for (Elem a = 0; a < n.order(); ++a)
    for (Elem b = 0; b < n.order(); ++b)
      if (f[n.mul(a, b)] != n.mul(f[a], f[b])) return false;
  return true;
}

std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

}  // namespace

GroupPtr cyclic(std::uint64_t n) {
  if (n < 1) fail(ErrorKind::ParamOutOfRange, "cyclic(n) needs n >= 1");
  guard(n);
  std::vector<Elem> table(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) table[a * n + b] = static_cast<Elem>((a + b) % n);
  Structure s;
  s.shape = Shape::Cyclic;
  s.modulus = n;
  std::vector<Elem> gens;
  if (n > 1) gens.push_back(1);
  return FiniteGroup::make(std::move(table), n, "C" + std::to_string(n), std::move(s), std::move(gens));
}

GroupPtr units_mod(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) fail(ErrorKind::ParamOutOfRange, "units_mod(p, k) needs p prime");
  if (k < 1) fail(ErrorKind::ParamOutOfRange, "units_mod(p, k) needs k >= 1");
  const std::uint64_t m = ipow(p, k);
  guard(m - m / p);
  std::vector<std::uint64_t> values;
  for (std::uint64_t v = 1; v < m; ++v)
    if (v % p != 0) values.push_back(v);
  std::vector<Elem> index_of(m, 0);
  for (std::size_t i = 0; i < values.size(); ++i) index_of[values[i]] = static_cast<Elem>(i);
  const std::size_t n = values.size();
  std::vector<Elem> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = index_of[(values[a] * values[b]) % m];
  std::vector<std::string> names;
  for (auto v : values) names.push_back(std::to_string(v));
  Structure s;
  s.shape = Shape::Units;
  s.modulus = m;
  s.prime = p;
  s.values = values;
  return FiniteGroup::make(std::move(table), n, "U(" + std::to_string(p) + "^" + std::to_string(k) + ")",
                           std::move(s), {}, std::move(names));
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  const std::size_t na = a->order(), nb = b->order(), n = na * nb;
  guard(n);
  std::vector<Elem> table(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      Elem xa = x % na, xb = x / na, ya = y % na, yb = y / na;
      table[static_cast<std::size_t>(x) * n + y] = a->mul(xa, ya) + static_cast<Elem>(na) * b->mul(xb, yb);
    }
  std::vector<Elem> gens;
  for (auto g : a->generators()) gens.push_back(g);
  for (auto g : b->generators()) gens.push_back(static_cast<Elem>(na) * g);
  std::vector<std::string> names;
  for (Elem x = 0; x < n; ++x) names.push_back(pair_name(a->element_name(x % na), b->element_name(x / na)));
  Structure s;
  s.shape = Shape::Product;
  s.factors = {a, b};
  return FiniteGroup::make(std::move(table), n, a->label() + " x " + b->label(), std::move(s), std::move(gens),
                           std::move(names));
}

GroupPtr semidirect(const GroupPtr& n_grp, const GroupPtr& h_grp, const SemidirectAction& action) {
  const std::size_t nn = n_grp->order(), nh = h_grp->order(), n = nn * nh;
  guard(n);
  if (action.size() != nh) fail(ErrorKind::BadAction, "action must give one map per element of H");
  for (Elem h = 0; h < nh; ++h)
    if (!is_automorphism_map(*n_grp, action[h]))
      fail(ErrorKind::BadAction, "action of H element " + std::to_string(h) + " is not an automorphism of N", {h});
  for (Elem h = 0; h < nh; ++h)
    for (Elem k = 0; k < nh; ++k)
      if (action[h_grp->mul(h, k)] != compose_maps(action[h], action[k]))
        fail(ErrorKind::BadAction,
             "action is not a homomorphism at h=" + std::to_string(h) + ", k=" + std::to_string(k), {h, k});
  std::vector<Elem> table(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      Elem a = x % nn, h = x / nn, b = y % nn, k = y / nn;
      table[static_cast<std::size_t>(x) * n + y] =
          n_grp->mul(a, action[h][b]) + static_cast<Elem>(nn) * h_grp->mul(h, k);
    }
  std::vector<Elem> gens;
  for (auto g : n_grp->generators()) gens.push_back(g);
  for (auto g : h_grp->generators()) gens.push_back(static_cast<Elem>(nn) * g);
  std::vector<std::string> names;
  for (Elem x = 0; x < n; ++x)
    names.push_back(pair_name(n_grp->element_name(x % nn), h_grp->element_name(x / nn)));
  Structure s;
  s.shape = Shape::Semidirect;
  s.factors = {n_grp, h_grp};
  s.action = action;
  return FiniteGroup::make(std::move(table), n, n_grp->label() + " : " + h_grp->label(), std::move(s),
                           std::move(gens), std::move(names));
}

SemidirectAction invert_action(const GroupPtr& n, const GroupPtr& h) {
  if (!n->is_abelian()) fail(ErrorKind::BadAction, "inversion is an automorphism only of abelian groups");
  if (h->structure().shape != Shape::Cyclic)
    fail(ErrorKind::BadAction, "invert action needs a cyclic acting group");
  std::vector<Elem> inversion(n->order());
  for (Elem x = 0; x < n->order(); ++x) inversion[x] = n->inv(x);
  SemidirectAction act;
  for (Elem k = 0; k < h->order(); ++k) act.push_back(k % 2 ? inversion : identity_map(n->order()));
  return act;
}

SemidirectAction mult_action(const GroupPtr& n, const GroupPtr& h) {
  const auto& ns = n->structure();
  const auto& hs = h->structure();
  if (ns.shape != Shape::Cyclic || hs.shape != Shape::Units)
    fail(ErrorKind::BadAction, "mult_action needs a cyclic group acted on by units_mod");
  const std::uint64_t m = ns.modulus;
  if (hs.modulus % m != 0)
    fail(ErrorKind::BadAction, "cyclic order " + std::to_string(m) + " must divide the unit modulus");
  SemidirectAction act;
  for (Elem u = 0; u < h->order(); ++u) {
    std::vector<Elem> f(m);
    for (std::uint64_t b = 0; b < m; ++b) f[b] = static_cast<Elem>((hs.values[u] % m) * b % m);
    act.push_back(std::move(f));
  }
  return act;
}

SemidirectAction action_from_generator_images(const GroupPtr& n, const GroupPtr& h,
                                              const std::vector<std::vector<Elem>>& images) {
  auto gens = h->generators();
  if (images.size() != gens.size())
    fail(ErrorKind::BadAction, "need one automorphism per generator of H (" + std::to_string(gens.size()) + ")");
  for (std::size_t j = 0; j < images.size(); ++j)
    if (!is_automorphism_map(*n, images[j]))
      fail(ErrorKind::BadAction, "image of generator " + std::to_string(j) + " is not an automorphism of N");
  SemidirectAction act(h->order());
  std::vector<bool> known(h->order(), false);
  act[0] = identity_map(n->order());
  known[0] = true;
  std::vector<Elem> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      Elem y = h->mul(x, gens[j]);
      auto value = compose_maps(act[x], images[j]);
      if (!known[y]) {
        known[y] = true;
        act[y] = std::move(value);
        queue.push_back(y);
      } else if (act[y] != value) {
        fail(ErrorKind::BadAction, "generator images violate a relation of H at element " + std::to_string(y),
             {x, static_cast<std::uint64_t>(j)});
      }
    }
  }
  return act;
}

GroupPtr dihedral(std::uint64_t n) {
  auto rot = cyclic(n);
  auto flip = cyclic(2);
  return semidirect(rot, flip, invert_action(rot, flip));
}

GroupPtr symmetric(unsigned degree) {
  if (degree < 1 || degree > 7) fail(ErrorKind::ParamOutOfRange, "symmetric(d) supports 1 <= d <= 7");
  std::vector<std::vector<unsigned>> perms;
  std::vector<unsigned> p(degree);
  std::iota(p.begin(), p.end(), 0u);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t n = perms.size();
  guard(n);
  auto code = [&](const std::vector<unsigned>& q) {
    return static_cast<Elem>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<Elem> table(n * n);
  std::vector<unsigned> r(degree);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (unsigned i = 0; i < degree; ++i) r[i] = perms[a][perms[b][i]];
      table[a * n + b] = code(r);
    }
  std::vector<std::string> names;
  for (const auto& q : perms) {
    std::string s = "[";
    for (unsigned i = 0; i < degree; ++i) s += (i ? " " : "") + std::to_string(q[i] + 1);
    names.push_back(s + "]");
  }
  return FiniteGroup::make(std::move(table), n, "S" + std::to_string(degree), {}, {}, std::move(names));
}

GroupPtr quaternion8() {
  // Index = unit + 4 * sign, units 1, i, j, k.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<Elem> table(64);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int u = x % 4, v = y % 4;
      int sign = (x / 4 + y / 4 + unit_sign[u][v]) % 2;
      table[x * 8 + y] = static_cast<Elem>(unit_mul[u][v] + 4 * sign);
    }
  std::vector<std::string> names{"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
  return FiniteGroup::make(std::move(table), 8, "Q8", {}, {}, std::move(names));
}

Subgroup coordinate_subgroup(const GroupPtr& g, unsigned coordinate) {
  const auto& s = g->structure();
  if (s.factors.size() != 2 || coordinate > 1)
    fail(ErrorKind::TypeMismatch, "group '" + g->label() + "' has no coordinate " + std::to_string(coordinate));
  ElementMask m(g->order());
  const auto& f = s.factors[coordinate];
  for (Elem x = 0; x < f->order(); ++x) m.set(coordinate == 0 ? g->from_coordinates(x, 0) : g->from_coordinates(0, x));
  return Subgroup::trusted(g, std::move(m));
}

}  // namespace pfg
