#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decoupling {

enum class ErrorCode {
  DuplicateIndexWithinTuple,
  RankMismatch,
  DimMismatch,
  NonFiniteValue,
  IndexOutOfRange,
  RankTooLarge,
  LengthMismatch,
  KernelEvaluationFailure,
  InvalidSpec,
  NotFinitelySupported,
  BudgetExceeded,
  DomainError,
  NonConvergence,
  EmptyFamily,
  InvalidCase,
  DegenerateTails,
  PreconditionViolated,
  HypothesisFailed,
  DivisionByZeroTail,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateIndexWithinTuple: return "DuplicateIndexWithinTuple";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::KernelEvaluationFailure: return "KernelEvaluationFailure";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NotFinitelySupported: return "NotFinitelySupported";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::InvalidCase: return "InvalidCase";
    case ErrorCode::DegenerateTails: return "DegenerateTails";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::DivisionByZeroTail: return "DivisionByZeroTail";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace decoupling
