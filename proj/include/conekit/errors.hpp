#ifndef CONEKIT_ERRORS_HPP
#define CONEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conekit {

enum class ErrorCode {
  DimensionMismatch,
  Unsupported,
  DimensionTooLarge,
  NotAutomorphism,
  NotInterior,
  NoConvergence,
  NotPositive,
  DegenerateIntersection,
  InvalidW,
  SolverFailure,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::InvalidW: return "InvalidW";
    case ErrorCode::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conekit

#endif  // CONEKIT_ERRORS_HPP
