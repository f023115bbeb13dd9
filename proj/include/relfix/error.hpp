#ifndef RELFIX_ERROR_HPP
#define RELFIX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relfix {

enum class ErrorKind {
  NotAPartialOrder,
  NoLeastElement,
  NotMonotone,
  SizeCapExceeded,
  NotAChain,
  NotEp,
  NotAnEmbedding,
  InternalInvariantViolation,
  TypeMismatch,
  LawViolation,
  DualMismatch,
  NegPosMismatch,
  CoherenceViolation,
  NotContractive,
  MethodDisagreement,
  CharacterizationMismatch,
  NotCauchy,
  EquivalenceMismatch,
  InadmissibleImage,
  PreconditionViolation,
  ParseError,
  ResolveError,
  InadmissibleConstRelation,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorKind::NoLeastElement: return "NoLeastElement";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::NotAChain: return "NotAChain";
    case ErrorKind::NotEp: return "NotEp";
    case ErrorKind::NotAnEmbedding: return "NotAnEmbedding";
    case ErrorKind::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::LawViolation: return "LawViolation";
    case ErrorKind::DualMismatch: return "DualMismatch";
    case ErrorKind::NegPosMismatch: return "NegPosMismatch";
    case ErrorKind::CoherenceViolation: return "CoherenceViolation";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::MethodDisagreement: return "MethodDisagreement";
    case ErrorKind::CharacterizationMismatch: return "CharacterizationMismatch";
    case ErrorKind::NotCauchy: return "NotCauchy";
    case ErrorKind::EquivalenceMismatch: return "EquivalenceMismatch";
    case ErrorKind::InadmissibleImage: return "InadmissibleImage";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ResolveError: return "ResolveError";
    case ErrorKind::InadmissibleConstRelation: return "InadmissibleConstRelation";
  }
  return "Unknown";
}

/// Every failure raised by the library. `witness` carries the element ids,
/// levels or indices that demonstrate the failure, in an order documented
/// at the throw site.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<long long> witness = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        detail_(what),
        witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<long long>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::vector<long long> witness_;
};

/// Resource limits applied to every construction.
struct Caps {
  std::size_t max_elements = 200000;
  std::size_t max_pairs = 10000000;
};

}  // namespace relfix

#endif  // RELFIX_ERROR_HPP
