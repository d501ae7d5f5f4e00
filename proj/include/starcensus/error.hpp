#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace starcensus {

enum class ErrorCode {
  NonPrime,
  EvenCharacteristic,
  SizeTooLarge,
  InvalidElement,
  InvalidArgument,
  ShapeMismatch,
  BudgetExceeded,
  UnsupportedDomain,
  RoundingResidualExceeded,
  SizeExceedsSpace,
  InvalidParams,
  ParseError,
  DomainMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; callers that need
// to distinguish failure classes (the CLI maps them to exit codes) inspect
// code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::SizeTooLarge: return "SizeTooLarge";
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorCode::RoundingResidualExceeded: return "RoundingResidualExceeded";
    case ErrorCode::SizeExceedsSpace: return "SizeExceedsSpace";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace starcensus
