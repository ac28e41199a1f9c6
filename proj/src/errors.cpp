#include "mmbm/errors.hpp"

namespace mmbm {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSingular: return "NotSingular";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::Breakdown: return "Breakdown";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidGenerator: return "InvalidGenerator";
    case ErrorCode::AssumptionA2: return "AssumptionA2";
    case ErrorCode::AssumptionA3: return "AssumptionA3";
    case ErrorCode::HViolation: return "HViolation";
    case ErrorCode::NotPositiveRecurrent: return "NotPositiveRecurrent";
    case ErrorCode::OracleInconclusive: return "OracleInconclusive";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadSize: return "BadSize";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace mmbm
