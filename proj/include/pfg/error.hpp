#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfg {

enum class ErrorKind {
  NotAssociative,
  NoIdentity,
  MissingInverse,
  BadTable,
  BadAction,
  ParamOutOfRange,
  OrderGuard,
  NotASubgroup,
  DifferentParents,
  NotNormal,
  DomainMismatch,
  NotAHomomorphism,
  NonCommutative,
  KNotSubgroup,
  SearchBudgetExceeded,
  PreconditionPrimes,
  NotInvariant,
  NotSurjectiveOnH,
  CoherenceViolation,
  NameUnresolved,
  DuplicateName,
  CommutativityFailed,
  TypeMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type. The
// witness carries the element indices (or level/element pairs) that violate
// the failed law, when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<std::uint64_t> witness = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::uint64_t>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<std::uint64_t> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::vector<std::uint64_t> witness = {}) {
  throw Error(kind, message, std::move(witness));
}

}  // namespace pfg
