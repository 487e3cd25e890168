#pragma once

#include <stdexcept>
#include <string>

namespace robinlab {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NonFinite,
  SingularOperator,
  SolverFailure,
  InvalidBracket,
  NonMonotoneVerdict,
  SingularJacobian,
  Stagnation,
  PreconditionViolated,
  PassNotFound,
  StiffnessFailure,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the C API maps it onto rl_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace robinlab
