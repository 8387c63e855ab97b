#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pfg/scenario.hpp"

namespace pfg {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Status { Pass, Fail, Skipped, HypothesesNotMet, BudgetExceeded };
std::string_view to_string(Status s);

struct AnalysisRecord {
  std::string kind;
  std::string target;
  Status status = Status::Fail;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::string summary;  // one-line text form
  std::optional<double> ms;
};

struct Report {
  std::string scenario;
  std::vector<AnalysisRecord> analyses;
  std::string version{kVersion};
  std::uint64_t seed = 0;
};

struct RunConfig {
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool timing = false;  // wall time is left out unless asked for, keeping output byte-stable
  std::optional<std::size_t> node_budget;
};

// Runs every analysis; records come back in request order whatever the job count.
Report run(const Scenario& sc, const RunConfig& cfg = {});

// A single analysis, with errors mapped to statuses.
AnalysisRecord run_analysis(const ResolvedAnalysis& a, std::uint64_t seed, std::size_t node_budget);

enum class Format { Text, Json };

nlohmann::ordered_json to_json(const Report& r);
std::string emit(const Report& r, Format f);

// 0 iff no record failed.
int exit_code(const Report& r);

// Scenario text behind `demo paper-example`: the Z/p^k x| units tower with
// theorem_a, theorem_b and typef requests.
std::string demo_scenario(std::uint64_t p, std::size_t depth);

}  // namespace pfg
