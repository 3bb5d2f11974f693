#pragma once

#include <stdexcept>
#include <string>

namespace ircg {

enum class ErrorCode {
  InvalidArgument,
  InvalidExponent,
  DimensionMismatch,
  MissingFiniteSum,
  PeriodTooSmall,
  StreamingOracle,
  NotYetDefined,
  BudgetZero,
  BudgetExhausted,
  MissingReference,
  StaleReference,
  InsufficientData,
  ParseError,
  RaggedRows,
  NonAscendingIndex,
  NumericalFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ircg
