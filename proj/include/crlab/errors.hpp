#pragma once

#include <stdexcept>
#include <string>

namespace crlab {

/// Coarse classification of failures raised by the library.
///
/// Check *outcomes* (a measured residual exceeding its tolerance) are never
/// exceptions — they are reported as failed checks.  Exceptions are reserved
/// for situations where a quantity cannot be meaningfully computed at all.
enum class ErrorKind {
  configuration,  ///< invalid numeric parameters (steps, ranges, counts)
  degenerate_frame,  ///< orthonormalization pivot fell below threshold
  domain,         ///< input outside the geometric domain of an operation
  consistency,    ///< internal cross-check failed (data no longer trustworthy)
  precondition,   ///< a required hypothesis was measured to fail
  capability,     ///< valid request, but outside what this build implements
};

/// Exception type carrying an ErrorKind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Human-readable name of an ErrorKind (stable, used in reports and the CLI).
[[nodiscard]] inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::degenerate_frame: return "degenerate_frame";
    case ErrorKind::domain: return "domain";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::capability: return "capability";
  }
  return "unknown";
}

}  // namespace crlab
