#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pfg/check.hpp"
#include "pfg/group.hpp"
#include "pfg/group_ops.hpp"
#include "pfg/lattice.hpp"
#include "pfg/numbers.hpp"

namespace pfg {

inline constexpr std::size_t kDefaultMonoidCap = 4096;
inline constexpr std::size_t kDefaultSearchBudget = 5'000'000;

// A finitely generated semigroup of endomorphisms of one group (Λ).
class EndoSemigroup {
 public:
  // Throws DomainMismatch when a generator lives on another group and
  // ParamOutOfRange when there are no generators.
  EndoSemigroup(GroupPtr parent, std::vector<Endomorphism> generators);
  explicit EndoSemigroup(const Endomorphism& phi) : EndoSemigroup(phi.group(), {phi}) {}

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Endomorphism>& generators() const { return generators_; }
  bool commutative() const { return !noncommuting_.has_value(); }
  // First generator pair (i, j) with g_i g_j != g_j g_i.
  const std::optional<std::pair<std::size_t, std::size_t>>& noncommuting_pair() const { return noncommuting_; }
  // g_1 ∘ g_2 ∘ ... ∘ g_r
  const Endomorphism& tail() const { return tail_; }

 private:
  GroupPtr parent_;
  std::vector<Endomorphism> generators_;
  std::optional<std::pair<std::size_t, std::size_t>> noncommuting_;
  Endomorphism tail_;
};

struct ContractionReport {
  Subgroup con;
  Subgroup stable_image;
  std::size_t depth = 0;
  std::vector<Subgroup> kernel_chain;  // index i holds the i-th candidate
  std::vector<Subgroup> image_chain;
  CheckRecord checks;
};

// Stabilized kernel and image of the powers of phi, cross-checked against
// direct orbit simulation for 2|G| steps.
ContractionReport contraction(const Endomorphism& phi);

// The five decomposition checks: con normal, con ∩ stable = 1,
// con · stable = G, phi bijective on stable, phi^k(con) = con ∩ im phi^k.
CheckRecord verify_theorem_A(const Endomorphism& phi);
CheckRecord verify_theorem_A(const Endomorphism& phi, const ContractionReport& report);

// Distinct element maps of the semigroup generated by Λ (identity excluded
// unless it is a product of generators). Throws SearchBudgetExceeded past cap.
std::vector<Endomorphism> generated_semigroup(const EndoSemigroup& lambda, std::size_t cap = kDefaultMonoidCap);

// Con(Λ, K) and Λ_∩(G) for commutative Λ via the tail map τ. Throws
// NonCommutative otherwise. For non-normal K the result is cross-checked
// against the literal filter definition, which wins on disagreement.
ContractionReport semigroup_contraction(const EndoSemigroup& lambda);
ContractionReport semigroup_contraction(const EndoSemigroup& lambda, const Subgroup& k);
// Throws KNotSubgroup unless the mask is closed.
ContractionReport semigroup_contraction(const EndoSemigroup& lambda, const ElementMask& k);

// {x : σ(x) ∈ K for all σ in ∩_ξ Λξ}, computed over the enumerated semigroup.
Subgroup filter_contraction(const EndoSemigroup& lambda, const Subgroup& k, std::size_t cap = kDefaultMonoidCap);

CheckRecord verify_splitthm(const EndoSemigroup& lambda);

struct OLambda {
  Subgroup subgroup;
  Nilpotency nilpotency;
};

// Closure of the union of Con(λ) over the generated semigroup.
OLambda o_lambda(const EndoSemigroup& lambda, std::size_t cap = kDefaultMonoidCap);

// |G : phi^-1(K)| <= |G : K|, and equality forces phi(G) K = G.
CheckRecord shrinkind_check(const Endomorphism& phi, const Subgroup& k);

struct HomSearchOptions {
  bool injective_only = true;
  std::size_t witness_cap = 16;
  std::size_t budget = kDefaultSearchBudget;  // search-tree nodes
  std::size_t stop_after = 0;                 // 0: count everything
};

struct HomEnumeration {
  std::size_t count = 0;
  std::vector<GroupHom> witnesses;
  std::size_t nodes = 0;
};

// Homomorphisms G -> H by backtracking over images of G's generators. Throws
// SearchBudgetExceeded when the node budget runs out.
HomEnumeration enumerate_homs(const GroupPtr& g, const GroupPtr& h, const HomSearchOptions& opts = {});

struct SimpleQuotientWitness {
  Subgroup minimal;  // normal subgroup of least index admitting no embedding of G
  Subgroup k;        // maximal normal subgroup containing it
  bool quotient_simple = false;
  std::size_t embeddings_into_k = 0;
};

struct HomSearchResult {
  std::size_t count = 0;
  std::vector<GroupHom> witnesses;  // into the ambient group of the target
  std::size_t nodes = 0;
  std::optional<SimpleQuotientWitness> simple_witness;
};

HomSearchResult hom_search(const GroupPtr& g, const GroupPtr& h, const HomSearchOptions& opts = {});
// Target given as a subgroup. When it sits inside G and no embedding exists,
// the simple-quotient witness is searched for as well.
HomSearchResult hom_search(const GroupPtr& g, const Subgroup& h, const HomSearchOptions& opts = {});

// Throws PreconditionPrimes unless pi contains the primes of |G : core(H)|.
CheckRecord lambdareslem_check(const Subgroup& h, const PrimeSet& pi);

// Induced map G/O^pi(G) -> H/O^pi(H) of an injective phi: G -> H. Throws
// PreconditionPrimes unless pi contains the primes of |H : core(phi(G))|,
// and ParamOutOfRange when phi is not injective.
CheckRecord fewprimes_check(const GroupHom& phi, const PrimeSet& pi);

// Conditions (a)-(c) with finite surrogates, λ-invariance of every I_n^Ω and
// the preimage statement for Ω-invariant normal subgroups.
CheckRecord verify_regulation(const EndoSemigroup& lambda, const AutoSet& omega);

// G must be a semidirect (or direct) product N x| H. Throws NotInvariant or
// NotSurjectiveOnH when the hypotheses fail.
CheckRecord tfrelstab_ii_check(const EndoSemigroup& lambda, const AutoSet& omega);

// Maps of N induced by conjugation by H (identity included, duplicates
// removed), as automorphisms of the embedded N.
std::vector<Endomorphism> conjugation_action(const GroupPtr& g, const Embedded& n, const Subgroup& h);

}  // namespace pfg
