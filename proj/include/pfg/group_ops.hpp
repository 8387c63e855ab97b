#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pfg/group.hpp"

namespace pfg {

// Smallest subgroup containing gens (breadth-first saturation).
Subgroup closure(const GroupPtr& g, std::span<const Elem> gens);
Subgroup join(const Subgroup& a, const Subgroup& b);
// Greedy generating set in ascending element order.
std::vector<Elem> small_generating_set(const Subgroup& s);

struct NormalityInfo {
  bool is_normal;
  Subgroup normal_closure;
  Subgroup core;
};

bool is_normal(const Subgroup& s);
Subgroup normal_closure(const Subgroup& s);
// Largest normal subgroup of the parent inside s.
Subgroup core(const Subgroup& s);
NormalityInfo normality_ops(const Subgroup& s);

struct SubgroupAlgebra {
  Subgroup intersection;
  ElementMask product_set;
  bool product_is_subgroup;
  bool product_covers_group;
};

Subgroup intersect(const Subgroup& a, const Subgroup& b);
ElementMask product_set(const Subgroup& a, const Subgroup& b);
SubgroupAlgebra subgroup_algebra(const Subgroup& a, const Subgroup& b);

struct Quotient {
  GroupPtr group;
  GroupHom projection;
};

// Quotient on minimal coset representatives; throws NotNormal.
Quotient quotient(const Subgroup& n);

struct HomParts {
  Subgroup kernel;
  Subgroup image;
  bool is_injective;
  bool is_surjective;
};

Subgroup kernel(const GroupHom& f);
Subgroup image(const GroupHom& f);
Subgroup image(const GroupHom& f, const Subgroup& s);
HomParts hom_parts(const GroupHom& f);

// g ∘ f: apply f first. Throws DomainMismatch unless codomain(f) is domain(g).
GroupHom compose(const GroupHom& f, const GroupHom& g);
Subgroup preimage(const GroupHom& f, const Subgroup& s);

// Setwise equality f(S) = S.
bool is_setwise_invariant(const GroupHom& f, const Subgroup& s);
// f(S) <= S.
bool maps_into(const GroupHom& f, const Subgroup& s);

// [A, B] generated by commutators a^-1 b^-1 a b.
Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b);

struct Nilpotency {
  bool is_nilpotent;
  std::optional<std::size_t> nilpotency_class;
  std::vector<Subgroup> lower_central_series;
  std::vector<Subgroup> derived_series;
  bool is_solvable;
};

Nilpotency nilpotency(const GroupPtr& g);

// A subgroup as a group in its own right (elements in ascending parent index
// order) together with the inclusion map.
struct Embedded {
  GroupPtr group;
  GroupHom inclusion;
  std::vector<Elem> local_index;  // parent element -> local index (or order() when absent)

  Elem local(Elem parent_elem) const { return local_index[parent_elem]; }
  Subgroup lift(const Subgroup& local_subgroup) const;
  Subgroup localize(const Subgroup& parent_subgroup) const;
};

Embedded as_group(const Subgroup& s);
// Restriction of an endomorphism that maps S into itself; throws NotInvariant.
Endomorphism restrict_to(const Endomorphism& f, const Embedded& s);

// x -> g x g^-1.
Endomorphism conjugation(const GroupPtr& g, Elem by);

bool is_simple(const GroupPtr& g);

}  // namespace pfg
