#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace billiards {

enum class ErrorCode {
  InvalidArgument,
  ConfigError,
  GlancingRay,
  NoTransversalHit,
  NewtonDivergence,
  DegenerateChord,
  QuadratureFailure,
  OrbitTooShort,
  NonCircleOrbit,
  ResonantRotation,
  FitDiverged,
  NonPeriodicOrbit,
  HyperbolicPoint,
  NonZeroMean,
  ResonantMode,
  GlancingCircle,
  HOutOfRange,
  SymmetryMismatch,
  DegenerateAction,
  NonPositiveD,
  MissingJet,
  OracleFailure,
  EmptySpectrumAboveAlpha,
  DTooSmall,
  GridTooCoarse,
  PathJumpsGap,
  RankDeficient,
  Unsupported,
};

std::string_view to_string(ErrorCode code);

// Validation errors map to CLI exit code 2, numerical failures to 3.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  Error(ErrorCode code, const std::string& message, long index)
      : std::runtime_error(std::string(to_string(code)) + ": " + message +
                           " (index " + std::to_string(index) + ")"),
        code_(code),
        detail_(message),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix or index suffix.
  const std::string& detail() const noexcept { return detail_; }
  // Position of the failing item (bounce, mode, row) when one applies.
  std::optional<long> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<long> index_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace billiards
