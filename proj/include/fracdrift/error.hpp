#pragma once

#include <stdexcept>
#include <string>

namespace fracdrift {

enum class ErrorCode {
  InvalidInput,
  Asymmetry,
  MultiplierDomain,
  Shape,
  Parameter,
  Dimension,
  DegenerateInput,
  InsufficientResolution,
  Resolution,
  Divergence,
  NonConvergence,
  BlowUp,
  UnsupportedRange,
  GateRejected,
  Io,
  Config,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fracdrift
