#pragma once

#include <stdexcept>
#include <string>

namespace monolab {

enum class ErrorCode {
  BadParams,
  DimensionMismatch,
  Unsupported,
  UnknownName,
  UnknownOperator,
  PointNotInSet,
  EmptyGraph,
  Degenerate,
  SolverLimit,
  ParseError,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace monolab
