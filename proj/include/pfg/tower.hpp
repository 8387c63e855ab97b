#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pfg/check.hpp"
#include "pfg/endo.hpp"
#include "pfg/group.hpp"

namespace pfg {

// Finite quotients G_1 <- G_2 <- ... <- G_d of a profinite group.
struct Tower {
  std::string label;
  std::vector<GroupPtr> levels;       // levels[k] is G_{k+1}
  std::vector<GroupHom> connecting;   // connecting[k]: levels[k+1] -> levels[k]
  std::size_t depth() const { return levels.size(); }
};

// One endomorphism per level commuting with the connecting maps.
struct CoherentEndoFamily {
  std::vector<Endomorphism> endos;
};

struct TowerBuild {
  Tower tower;
  CoherentEndoFamily family;
};

// Builder request: kind is one of zp, zpn, units_semidirect, product,
// s3_times_z2, trivial. product takes its two factors in `parts`.
struct TowerSpec {
  std::string kind;
  std::vector<std::uint64_t> params;
  std::vector<TowerSpec> parts;
};

std::string to_string(const TowerSpec& spec);

// Throws ParamOutOfRange for unknown kinds or bad parameters,
// CoherenceViolation when a square fails, OrderGuard past the guard.
TowerBuild build_tower(const TowerSpec& spec, std::size_t depth);

TowerBuild zp_tower(std::uint64_t p, std::size_t depth);
TowerBuild zpn_tower(std::uint64_t p, std::size_t n, std::size_t depth);
TowerBuild units_semidirect_tower(std::uint64_t p, std::size_t depth);
TowerBuild product_tower(const TowerBuild& a, const TowerBuild& b);
TowerBuild s3_times_z2_tower(std::size_t depth);
TowerBuild trivial_tower(std::size_t depth);

// Checks surjectivity of every connecting map and every square
// pi_k ∘ phi_{k+1} = phi_k ∘ pi_k. Throws CoherenceViolation with
// witness {level, element}.
void validate_coherence(const Tower& t, const CoherentEndoFamily& f);

CoherentEndoFamily identity_family(const Tower& t);

// Composite of connecting maps from level `from` down to level `to` (0-based).
GroupHom projection(const Tower& t, std::size_t from, std::size_t to);

struct LimitDiagnostics {
  bool limit_injective = false;
  // Number of levels (from the bottom) whose projected kernels are seen to
  // vanish inside the tower.
  std::size_t verified_depth = 0;
  // For each level k: the smallest K >= k with trivial projection of
  // ker phi_K, or 0 when none exists within the tower.
  std::vector<std::size_t> vanishing_level;
  std::vector<std::size_t> image_indices;
  bool image_open = false;
  std::size_t image_index_bound = 0;
  // {level, element} in the projected kernel when injectivity fails.
  std::vector<std::uint64_t> witness;
};

LimitDiagnostics limit_diagnostics(const Tower& t, const CoherentEndoFamily& f);

struct LevelCoherence {
  bool projection_inclusion = false;  // pi_k(Con_{k+1}) <= Con_k
  bool projection_equality = false;
  bool stable_projection_equality = false;
};

struct TowerReport {
  std::vector<ContractionReport> levels;
  std::vector<CheckRecord> theorem_a;
  LimitDiagnostics limit;
  std::vector<LevelCoherence> coherence;  // entry k compares level k+1 with level k
  bool theorem_a_passed() const;
  bool inclusions_hold() const;
};

TowerReport levelwise_contraction(const Tower& t, const CoherentEndoFamily& f);

enum class Verdict { Pass, Fail, NotApplicable, HypothesesNotMet };
std::string_view to_string(Verdict v);

struct TheoremBReport {
  std::vector<LimitDiagnostics> limits;  // one per generator family
  bool hypotheses_met = false;
  std::vector<std::uint64_t> hypothesis_witness;  // {family, level, element}
  std::vector<OLambda> o_lambda;                  // per level
  std::vector<bool> iterate_vanishes;             // per level
  Verdict part_i = Verdict::HypothesesNotMet;
  Verdict part_ii = Verdict::HypothesesNotMet;
  CheckRecord checks;
};

// Nilpotency of O_Λ is asserted only when every family is limit-injective
// with open image; otherwise the verdicts are HypothesesNotMet.
TheoremBReport verify_theorem_B_tower(const Tower& t, const std::vector<CoherentEndoFamily>& lambda);

struct TypeFProfile {
  std::vector<CountProfile> levels;
  bool stabilized = false;
  bool complete = true;
};

TypeFProfile typeF_profile(const Tower& t, std::size_t n, std::size_t node_budget = kDefaultNodeBudget);

}  // namespace pfg
