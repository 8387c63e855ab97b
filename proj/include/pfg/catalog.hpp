#pragma once

#include <cstdint>
#include <vector>

#include "pfg/group.hpp"

namespace pfg {

// One automorphism of N (as an element map) per element of H.
using SemidirectAction = std::vector<std::vector<Elem>>;

GroupPtr cyclic(std::uint64_t n);
// Units of Z/p^k, elements in ascending residue order.
GroupPtr units_mod(std::uint64_t p, unsigned k);
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
// Pairs (a, h) with (a, h)(b, k) = (a * action[h](b), hk). Throws BadAction
// unless every action[h] is an automorphism of N and h -> action[h] is a
// homomorphism.
GroupPtr semidirect(const GroupPtr& n, const GroupPtr& h, const SemidirectAction& action);

// H cyclic acting on abelian N through its generator inverting.
SemidirectAction invert_action(const GroupPtr& n, const GroupPtr& h);
// Units of Z/p^k acting on a cyclic group of order dividing p^k by multiplication.
SemidirectAction mult_action(const GroupPtr& n, const GroupPtr& h);
// Extends images of H's generators (automorphisms of N) to an action.
SemidirectAction action_from_generator_images(const GroupPtr& n, const GroupPtr& h,
                                              const std::vector<std::vector<Elem>>& images);

GroupPtr dihedral(std::uint64_t n);  // order 2n
GroupPtr symmetric(unsigned degree);
GroupPtr quaternion8();

// The embedded copy of factor `coordinate` (0 or 1) of a Product/Semidirect.
Subgroup coordinate_subgroup(const GroupPtr& g, unsigned coordinate);

}  // namespace pfg
