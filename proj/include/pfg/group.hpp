#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfg/element_mask.hpp"
#include "pfg/error.hpp"

namespace pfg {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Process-wide cap on group orders accepted by every constructor.
std::size_t order_guard();
void set_order_guard(std::size_t max_order);

class OrderGuardScope {
 public:
  explicit OrderGuardScope(std::size_t max_order) : saved_(order_guard()) { set_order_guard(max_order); }
  ~OrderGuardScope() { set_order_guard(saved_); }
  OrderGuardScope(const OrderGuardScope&) = delete;
  OrderGuardScope& operator=(const OrderGuardScope&) = delete;

 private:
  std::size_t saved_;
};

inline constexpr std::size_t kDefaultOrderGuard = 5000;
// Below this order associativity is checked on every triple.
inline constexpr std::size_t kFullAssociativityScanBelow = 512;

// How a group was built. Two-factor shapes store element (a, b) at index
// a + |factor0| * b, so coordinates can be recovered without a lookup.
enum class Shape { Table, Cyclic, Units, Product, Semidirect };

struct Structure {
  Shape shape = Shape::Table;
  std::uint64_t modulus = 0;            // Cyclic: n; Units: p^k
  std::uint64_t prime = 0;              // Units: p
  std::vector<std::uint64_t> values;    // Units: residue of each element
  std::vector<GroupPtr> factors;        // Product / Semidirect: {N, H}
  std::vector<std::vector<Elem>> action;  // Semidirect: automorphism of N per h
};

class FiniteGroup {
 public:
  std::size_t order() const { return order_; }
  static constexpr Elem identity() { return 0; }

  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inverse_[a]; }
  // g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inverse_[g]); }
  Elem pow(Elem x, std::int64_t k) const;
  std::size_t element_order(Elem x) const { return element_order_[x]; }
  bool is_abelian() const;

  const std::string& label() const { return label_; }
  const std::string& element_name(Elem x) const { return names_[x]; }
  std::span<const Elem> generators() const { return generators_; }
  const Structure& structure() const { return structure_; }
  std::span<const Elem> table() const { return table_; }

  // Coordinates of a Product/Semidirect element.
  std::pair<Elem, Elem> coordinates(Elem x) const;
  Elem from_coordinates(Elem a, Elem b) const;

  // Validating constructor shared by every builder. The identity must already
  // sit at index 0; generators and names are computed when left empty.
  static GroupPtr make(std::vector<Elem> table, std::size_t order, std::string label,
                       Structure structure = {}, std::vector<Elem> generators = {},
                       std::vector<std::string> names = {});

 private:
  FiniteGroup() = default;

  std::size_t order_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
  std::vector<std::size_t> element_order_;
  std::vector<Elem> generators_;
  std::vector<std::string> names_;
  std::string label_;
  Structure structure_;
};

// Builds a group from a square table of element indices, relabelling the
// identity to index 0 (by swapping it with the old element 0).
GroupPtr build_from_table(const std::vector<std::vector<Elem>>& table, std::string label);

class Subgroup {
 public:
  // Checks closure; throws NotASubgroup otherwise.
  Subgroup(GroupPtr parent, ElementMask members);

  static Subgroup trivial(GroupPtr parent);
  static Subgroup whole(GroupPtr parent);
  // For masks already known to be subgroups (kernels, preimages, meets).
  static Subgroup trusted(GroupPtr parent, ElementMask members);

  const GroupPtr& parent() const { return parent_; }
  const ElementMask& mask() const { return members_; }
  std::size_t size() const { return size_; }
  std::size_t index() const { return parent_->order() / size_; }
  bool contains(Elem x) const { return members_.test(x); }
  bool is_trivial() const { return size_ == 1; }
  bool is_whole() const { return size_ == parent_->order(); }
  bool subset_of(const Subgroup& other) const { return members_.subset_of(other.members_); }
  std::vector<Elem> elements() const { return members_.elements(); }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.members_ == b.members_;
  }

 private:
  struct Trusted {};
  Subgroup(Trusted, GroupPtr parent, ElementMask members);

  GroupPtr parent_;
  ElementMask members_;
  std::size_t size_ = 0;
};

// Canonical order used by every catalog: ascending size, then ascending
// sorted element lists.
bool canonical_less(const Subgroup& a, const Subgroup& b);

class GroupHom {
 public:
  // Validates totality, ranges, and map(xy) = map(x)map(y) on all pairs;
  // throws NotAHomomorphism with the violating pair.
  GroupHom(GroupPtr domain, GroupPtr codomain, std::vector<Elem> map);

  static GroupHom trusted(GroupPtr domain, GroupPtr codomain, std::vector<Elem> map);
  static GroupHom identity(const GroupPtr& g);
  static GroupHom trivial(GroupPtr domain, GroupPtr codomain);

  Elem operator()(Elem x) const { return map_[x]; }
  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  std::span<const Elem> table() const { return map_; }
  bool is_endomorphism() const { return domain_ == codomain_; }

  friend bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.map_ == b.map_;
  }

 protected:
  struct Trusted {};
  GroupHom(Trusted, GroupPtr domain, GroupPtr codomain, std::vector<Elem> map)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), map_(std::move(map)) {}

 private:
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<Elem> map_;
};

class Endomorphism : public GroupHom {
 public:
  // Throws DomainMismatch unless domain and codomain are the same object.
  explicit Endomorphism(GroupHom hom);
  Endomorphism(const GroupPtr& g, std::vector<Elem> map) : Endomorphism(GroupHom(g, g, std::move(map))) {}

  static Endomorphism identity(const GroupPtr& g) { return Endomorphism(GroupHom::identity(g)); }
  static Endomorphism trivial(const GroupPtr& g) { return Endomorphism(GroupHom::trivial(g, g)); }

  const GroupPtr& group() const { return domain(); }
  Endomorphism power(std::size_t k) const;
  Endomorphism then(const Endomorphism& next) const;  // next ∘ this
  bool is_automorphism() const;
};

}  // namespace pfg
