#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace catpump {

// Three families map onto distinct CLI exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroFrequencyTerm : NumericalError {
  using NumericalError::NumericalError;
};
struct MissingOrderTag : NumericalError {
  using NumericalError::NumericalError;
};
struct DimensionTooSmall : NumericalError {
  using NumericalError::NumericalError;
};
struct MissingMonomial : NumericalError {
  using NumericalError::NumericalError;
};
struct NoConvergence : NumericalError {
  using NumericalError::NumericalError;
};
struct NoSolution : NumericalError {
  using NumericalError::NumericalError;
};
struct PropagatorNonUnitary : NumericalError {
  using NumericalError::NumericalError;
};
struct TrackingAmbiguous : NumericalError {
  using NumericalError::NumericalError;
};
struct NoMinimum : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateModes : NumericalError {
  using NumericalError::NumericalError;
};

struct NearResonance : ValidityError {
  using ValidityError::ValidityError;
};
struct ResonantDisplacement : ValidityError {
  using ValidityError::ValidityError;
};
struct TruncationUnconverged : ValidityError {
  using ValidityError::ValidityError;
};

struct Warning {
  std::string kind;
  std::string detail;
  double value = 0.0;
};

using WarningLog = std::vector<Warning>;

inline void warn(WarningLog* log, std::string kind, std::string detail, double value = 0.0) {
  if (log) log->push_back({std::move(kind), std::move(detail), value});
}

}  // namespace catpump
