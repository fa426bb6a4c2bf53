#include "cansys/error.hpp"

namespace cansys {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::SingularModulus: return "SingularModulus";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::HyperbolicOverflow: return "HyperbolicOverflow";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::GaugeViolation: return "GaugeViolation";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::NonsmoothHamiltonian: return "NonsmoothHamiltonian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ComplexWAtI: return "ComplexWAtI";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::DefectMismatch: return "DefectMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SingularS1: return "SingularS1";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace cansys
