#pragma once

#include <stdexcept>
#include <string>

namespace speclust {

enum class ErrorCode {
  InvalidMatrix,
  SingularPencil,
  InvalidK,
  DegenerateData,
  DisconnectedGraph,
  FormatError,
  IsolatedNode,
  InvalidConstraint,
  InsufficientLabels,
  InsufficientPairs,
  BetaOutOfRange,
  NoFeasibleCut,
  SingularWeighting,
  InvalidInput,
};

const char* error_code_name(ErrorCode code);

/// All library failures are reported through this exception type; the code
/// distinguishes validation problems from solver outcomes (NoFeasibleCut).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::InsufficientLabels: return "InsufficientLabels";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::NoFeasibleCut: return "NoFeasibleCut";
    case ErrorCode::SingularWeighting: return "SingularWeighting";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "UnknownError";
}

}  // namespace speclust
