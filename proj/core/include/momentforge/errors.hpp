#pragma once

#include <stdexcept>
#include <string>

namespace momentforge {

// Machine-readable error codes. Every failure surfaced by the library or the
// CLI carries one of these so callers can branch without parsing messages.
enum class ErrorCode {
  SyntaxError,
  ProbabilityError,
  ValidationError,
  NotApplicable,
  AssumptionUnverified,
  NonFiniteCondition,
  IncomparableSupport,
  DegenerateSupport,
  UnsupportedDistribution,
  UnsupportedAlgebraicDegree,
  SymbolicCharPoly,
  OrderingViolation,
  StateExplosion,
  ContinuousDistribution,
  LimitDoesNotExist,
  IndeterminateWithSymbolicBases,
  ZeroDenominator,
  DegenerateVariance,
  NonPositiveThreshold,
  UsageError,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

// Parse errors carry a position into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, int line, int col)
      : Error(ErrorCode::SyntaxError, std::move(message)), line_(line), col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace momentforge
