#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pfg/endo.hpp"
#include "pfg/group.hpp"
#include "pfg/lattice.hpp"
#include "pfg/tower.hpp"

namespace pfg {

struct SourceLoc {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based, in code points
};

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string snippet;  // the source line
};

std::string format(const ParseDiagnostic& d);

struct Expr {
  enum class Kind { Int, Str, Raw, Name, Call, Set, Map, SubgroupLit, Power, Product };
  Kind kind = Kind::Int;
  std::int64_t number = 0;  // Int value, Raw index, Power exponent
  std::string text;         // Name, Call name, Str contents
  std::vector<Expr> items;  // Call args, Set/SubgroupLit members, Map key/value pairs, Power base, Product factors
  SourceLoc loc;
};

// Structural equality; locations are ignored.
bool operator==(const Expr& a, const Expr& b);
std::string unparse(const Expr& e);

enum class StmtKind { Group, Endo, Hom, Semigroup, Tower, Analyze, Set };

struct Statement {
  StmtKind kind = StmtKind::Group;
  std::string name;  // defined name, analysis kind, or option key
  std::string on;    // Endo/Semigroup: group; Hom: domain
  std::string to;    // Hom: codomain
  Expr value;        // body, analysis call, or option value
  bool commutative = false;
  std::uint64_t depth = 0;
  SourceLoc loc;
};

bool operator==(const Statement& a, const Statement& b);

struct ScenarioSpec {
  std::vector<Statement> statements;

  std::vector<const Statement*> definitions() const;
  std::vector<const Statement*> analyses() const;
  std::vector<const Statement*> options() const;
};

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b);

// Canonical text: one statement per line.
std::string unparse(const Statement& s);
std::string unparse(const ScenarioSpec& spec);

struct ParseResult {
  std::optional<ScenarioSpec> spec;  // absent whenever there is a diagnostic error
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return spec.has_value(); }
};

ParseResult parse(const std::string& source);

// Error raised by validate, carrying the statement location.
class ScenarioError : public Error {
 public:
  ScenarioError(const Error& e, SourceLoc loc) : Error(e), loc_(loc) {}
  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

struct Options {
  std::string label;
  std::size_t order_guard = kDefaultOrderGuard;
  std::size_t node_budget = kDefaultNodeBudget;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
};

using TowerPtr = std::shared_ptr<const TowerBuild>;

// A typed analysis argument.
using Value = std::variant<GroupPtr, GroupHom, EndoSemigroup, TowerPtr, Subgroup, PrimeSet, std::uint64_t, AutoSet>;

struct ResolvedAnalysis {
  std::string kind;
  std::string target;  // canonical argument text
  std::vector<Value> args;
  SourceLoc loc;
};

struct Scenario {
  ScenarioSpec spec;
  Options options;
  std::map<std::string, GroupPtr> groups;
  std::map<std::string, GroupHom> homs;  // endomorphisms included
  std::map<std::string, EndoSemigroup> semigroups;
  std::map<std::string, TowerPtr> towers;
  std::vector<ResolvedAnalysis> analyses;
};

struct ValidateOptions {
  std::optional<std::size_t> order_guard;  // overrides `set order_guard`
  std::string base_dir;                    // resolves relative table() paths
};

// Builds every object through the library constructors. Throws ScenarioError
// (NameUnresolved, DuplicateName, NotAHomomorphism, CommutativityFailed,
// OrderGuard, TypeMismatch, ...).
Scenario validate(const ScenarioSpec& spec, const ValidateOptions& opts = {});

// Known analysis kinds, in documentation order.
const std::vector<std::string>& analysis_kinds();

// Whitespace-separated square integer matrix.
std::vector<std::vector<Elem>> read_table_file(const std::string& path);

}  // namespace pfg
