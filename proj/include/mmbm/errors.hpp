#ifndef MMBM_ERRORS_HPP
#define MMBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mmbm {

enum class ErrorCode {
  SingularMatrix,
  NotSingular,
  Reducible,
  Breakdown,
  NoConvergence,
  InvalidGenerator,
  AssumptionA2,
  AssumptionA3,
  HViolation,
  NotPositiveRecurrent,
  OracleInconclusive,
  DimensionMismatch,
  ParseError,
  BadSize,
  Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

  // Exit code contract of the command-line tool: 2 = input could not be
  // parsed, 3 = model rejected by validation, 4 = numerical failure.
  int exit_code() const {
    switch (code_) {
      case ErrorCode::ParseError:
      case ErrorCode::BadSize:
        return 2;
      case ErrorCode::InvalidGenerator:
      case ErrorCode::Reducible:
      case ErrorCode::AssumptionA2:
      case ErrorCode::AssumptionA3:
      case ErrorCode::HViolation:
      case ErrorCode::DimensionMismatch:
      case ErrorCode::NotPositiveRecurrent:
        return 3;
      case ErrorCode::SingularMatrix:
      case ErrorCode::NotSingular:
      case ErrorCode::Breakdown:
      case ErrorCode::NoConvergence:
      case ErrorCode::OracleInconclusive:
        return 4;
      case ErrorCode::Internal:
        return 1;
    }
    return 1;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mmbm

#endif  // MMBM_ERRORS_HPP
