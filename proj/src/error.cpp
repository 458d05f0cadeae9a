#include "monolab/error.hpp"

namespace monolab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParams: return "BAD_PARAMS";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::UnknownName: return "UNKNOWN_NAME";
    case ErrorCode::UnknownOperator: return "UNKNOWN_OPERATOR";
    case ErrorCode::PointNotInSet: return "POINT_NOT_IN_SET";
    case ErrorCode::EmptyGraph: return "EMPTY_GRAPH";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::SolverLimit: return "SOLVER_LIMIT";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

} // namespace monolab
