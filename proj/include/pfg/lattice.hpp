#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "pfg/group.hpp"
#include "pfg/numbers.hpp"

namespace pfg {

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

struct SubgroupCatalog {
  GroupPtr parent;
  std::size_t max_index = 1;
  std::vector<Subgroup> entries;  // canonical order
  bool complete = true;
  std::size_t steps = 0;          // closure steps spent
};

// Automorphisms of one group (Ω in the regulation conditions).
class AutoSet {
 public:
  explicit AutoSet(GroupPtr parent) : parent_(std::move(parent)) {}
  // Throws NotAHomomorphism/DomainMismatch unless every map is a bijective
  // endomorphism of parent.
  AutoSet(GroupPtr parent, std::vector<Endomorphism> maps);

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Endomorphism>& maps() const { return maps_; }
  bool empty() const { return maps_.empty(); }

 private:
  GroupPtr parent_;
  std::vector<Endomorphism> maps_;
};

// All subgroups of index <= max_index. Completeness is reported honestly when
// node_budget closure steps run out.
SubgroupCatalog enumerate_subgroups(const GroupPtr& g, std::size_t max_index,
                                    std::size_t node_budget = kDefaultNodeBudget);

// All normal subgroups, canonical order.
std::vector<Subgroup> enumerate_normals(const GroupPtr& g);

// Meet of the normal subgroups of index <= n that every map in omega fixes
// setwise. An empty omega gives the plain residual I_n.
Subgroup residual_intersection(const GroupPtr& g, std::size_t n, const AutoSet& omega);
Subgroup residual_intersection(const GroupPtr& g, std::size_t n);

// The normal subgroups that qualify for residual_intersection.
std::vector<Subgroup> invariant_normals(const GroupPtr& g, std::size_t n, const AutoSet& omega);

// Smallest normal subgroup with a pi-group quotient.
Subgroup o_pi(const GroupPtr& g, const PrimeSet& pi);

struct CountProfile {
  std::map<std::size_t, std::size_t> counts;  // index -> number of subgroups
  bool complete = true;
};

CountProfile count_profile(const GroupPtr& g, std::size_t n, std::size_t node_budget = kDefaultNodeBudget);

std::vector<Subgroup> maximal_normals(const GroupPtr& g);

}  // namespace pfg
