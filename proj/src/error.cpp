#include "pfg/error.hpp"

namespace pfg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::MissingInverse: return "MissingInverse";
    case ErrorKind::BadTable: return "BadTable";
    case ErrorKind::BadAction: return "BadAction";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::OrderGuard: return "OrderGuard";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::DifferentParents: return "DifferentParents";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NonCommutative: return "NonCommutative";
    case ErrorKind::KNotSubgroup: return "KNotSubgroup";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::PreconditionPrimes: return "PreconditionPrimes";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotSurjectiveOnH: return "NotSurjectiveOnH";
    case ErrorKind::CoherenceViolation: return "CoherenceViolation";
    case ErrorKind::NameUnresolved: return "NameUnresolved";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::CommutativityFailed: return "CommutativityFailed";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pfg
