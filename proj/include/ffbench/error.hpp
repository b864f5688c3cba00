#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffbench {

enum class ErrorKind {
  EmptyInput,
  BadOrder,
  DegenerateTarget,
  BudgetExceeded,
  InvalidCap,
  Unembeddable,
  NonIntegral,
  NotStopped,
  Stalled,
  DiscriminantZero,
  ComplexRoots,
  OutOfDomain,
  MissingParent,
  Inconsistent,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All operations report failure by throwing Error; the kind is what callers
// (and the CLI exit-code table) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::BadOrder: return "BadOrder";
    case ErrorKind::DegenerateTarget: return "DegenerateTarget";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidCap: return "InvalidCap";
    case ErrorKind::Unembeddable: return "Unembeddable";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::NotStopped: return "NotStopped";
    case ErrorKind::Stalled: return "Stalled";
    case ErrorKind::DiscriminantZero: return "DiscriminantZero";
    case ErrorKind::ComplexRoots: return "ComplexRoots";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::MissingParent: return "MissingParent";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ffbench
