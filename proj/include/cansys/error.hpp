#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cansys {

enum class ErrorCode {
  NotPSD,
  NotContractive,
  NotExpanding,
  SingularModulus,
  NotUnimodular,
  HyperbolicOverflow,
  PoleHit,
  InvalidProfile,
  StepTooLarge,
  GaugeViolation,
  NormalizationFailure,
  NonsmoothHamiltonian,
  NoConvergence,
  ComplexWAtI,
  SingularResolvent,
  DefectMismatch,
  IllConditioned,
  SingularS1,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cansys
