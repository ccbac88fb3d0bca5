#include "billiards/errors.hpp"

namespace billiards {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::GlancingRay: return "GlancingRay";
    case ErrorCode::NoTransversalHit: return "NoTransversalHit";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::DegenerateChord: return "DegenerateChord";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::OrbitTooShort: return "OrbitTooShort";
    case ErrorCode::NonCircleOrbit: return "NonCircleOrbit";
    case ErrorCode::ResonantRotation: return "ResonantRotation";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::NonPeriodicOrbit: return "NonPeriodicOrbit";
    case ErrorCode::HyperbolicPoint: return "HyperbolicPoint";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::ResonantMode: return "ResonantMode";
    case ErrorCode::GlancingCircle: return "GlancingCircle";
    case ErrorCode::HOutOfRange: return "HOutOfRange";
    case ErrorCode::SymmetryMismatch: return "SymmetryMismatch";
    case ErrorCode::DegenerateAction: return "DegenerateAction";
    case ErrorCode::NonPositiveD: return "NonPositiveD";
    case ErrorCode::MissingJet: return "MissingJet";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::EmptySpectrumAboveAlpha: return "EmptySpectrumAboveAlpha";
    case ErrorCode::DTooSmall: return "DTooSmall";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::PathJumpsGap: return "PathJumpsGap";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
    case ErrorCode::GlancingRay:
    case ErrorCode::NonZeroMean:
    case ErrorCode::ResonantMode:
    case ErrorCode::HOutOfRange:
    case ErrorCode::DegenerateAction:
    case ErrorCode::EmptySpectrumAboveAlpha:
    case ErrorCode::DTooSmall:
    case ErrorCode::Unsupported:
      return false;
    default:
      return true;
  }
}

}  // namespace billiards
