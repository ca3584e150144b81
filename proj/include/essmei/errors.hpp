#pragma once

// Error taxonomy shared by every module. Each failure carries a machine
// readable kind so callers (and the CLI exit-code mapping) can branch on it
// without parsing message text.

#include <stdexcept>
#include <string>
#include <utility>

namespace essmei {

enum class ErrorKind {
  // data / ingest
  MissingColumn,
  NonHourlySpacing,
  NonNumericCell,
  EmptySeries,
  UnknownFuel,
  InvalidValue,
  // parameter validation
  InvalidParams,
  LengthMismatch,
  ResourceMismatch,
  // estimation
  DegenerateDesign,
  EmptySegmentDomain,
  // optimization
  Infeasible,
  BudgetExceeded,
  SolverFailure,
  // cli / config
  ConfigError,
  IoError,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonHourlySpacing: return "NonHourlySpacing";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::UnknownFuel: return "UnknownFuel";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ResourceMismatch: return "ResourceMismatch";
    case ErrorKind::DegenerateDesign: return "DegenerateDesign";
    case ErrorKind::EmptySegmentDomain: return "EmptySegmentDomain";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace essmei
