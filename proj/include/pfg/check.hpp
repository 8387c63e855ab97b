#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace pfg {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::uint64_t> witness;
};

// Named boolean results. Failures are recorded here, never thrown.
struct CheckRecord {
  std::vector<Check> checks;

  void add(std::string name, bool passed, std::string detail = {}, std::vector<std::uint64_t> witness = {}) {
    checks.push_back({std::move(name), passed, std::move(detail), std::move(witness)});
  }
  void append(const CheckRecord& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail, c.witness});
  }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

}  // namespace pfg
