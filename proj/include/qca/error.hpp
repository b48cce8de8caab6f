#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qca {

enum class ErrorKind {
  NotSkewSymmetrizable,
  DivisionByZero,
  DirectionOutOfRange,
  DimensionMismatch,
  TwoParameterUnsupported,
  NotIntegralOmega,
  NotSecondDeformation,
  SignCoherenceViolation,
  NotIndecomposable,
  NoNonzeroP,
  SizeBound,
  InvalidSeed,
  Overflow,
  Parse,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSkewSymmetrizable: return "NotSkewSymmetrizable";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DirectionOutOfRange: return "DirectionOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TwoParameterUnsupported: return "TwoParameterUnsupported";
    case ErrorKind::NotIntegralOmega: return "NotIntegralOmega";
    case ErrorKind::NotSecondDeformation: return "NotSecondDeformation";
    case ErrorKind::SignCoherenceViolation: return "SignCoherenceViolation";
    case ErrorKind::NotIndecomposable: return "NotIndecomposable";
    case ErrorKind::NoNonzeroP: return "NoNonzeroP";
    case ErrorKind::SizeBound: return "SizeBound";
    case ErrorKind::InvalidSeed: return "InvalidSeed";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure on malformed input or a violated precondition is reported
/// through this exception. Mathematical verdicts (a condition that simply
/// does not hold) are returned as values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qca
