#include "fflab/error.hpp"

namespace fflab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::PointOutsideCarrier: return "PointOutsideCarrier";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::FactoredFormRequired: return "FactoredFormRequired";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NotSubset: return "NotSubset";
    case ErrorCode::DegeneracyDetected: return "DegeneracyDetected";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fflab
