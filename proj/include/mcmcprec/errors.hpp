#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcmcprec {

enum class ErrorKind {
  EmptyChain,
  InsufficientTransitions,
  EmptyMerge,
  NonContiguousIterations,
  ParseError,
  DegenerateRow,
  NoUniqueStationary,
  NonStochastic,
  DomainError,
  DegenerateSamples,
  InsufficientDraws,
  LabelError,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyChain: return "EmptyChain";
    case ErrorKind::InsufficientTransitions: return "InsufficientTransitions";
    case ErrorKind::EmptyMerge: return "EmptyMerge";
    case ErrorKind::NonContiguousIterations: return "NonContiguousIterations";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DegenerateRow: return "DegenerateRow";
    case ErrorKind::NoUniqueStationary: return "NoUniqueStationary";
    case ErrorKind::NonStochastic: return "NonStochastic";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateSamples: return "DegenerateSamples";
    case ErrorKind::InsufficientDraws: return "InsufficientDraws";
    case ErrorKind::LabelError: return "LabelError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Coarse grouping used by the CLI to choose an exit status.
enum class ErrorClass { Input, Numerical, Config };

inline ErrorClass classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyChain:
    case ErrorKind::InsufficientTransitions:
    case ErrorKind::EmptyMerge:
    case ErrorKind::NonContiguousIterations:
    case ErrorKind::ParseError:
      return ErrorClass::Input;
    // A label error means a requested label is not among the observed models.
    case ErrorKind::LabelError:
    case ErrorKind::InvalidArgument:
      return ErrorClass::Config;
    default:
      return ErrorClass::Numerical;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace mcmcprec
