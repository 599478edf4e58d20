#pragma once

#include <stdexcept>
#include <string>

namespace heatchan {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A coefficient sum could not be certified below the requested tolerance.
struct NotSummableError : Error {
  using Error::Error;
};

/// Recursive history requested for a profile that is not scaled-geometric.
struct ModeMismatchError : Error {
  using Error::Error;
};

/// The ratio premise of the scale-constant computation fails on the
/// validation horizon.
struct PremiseViolatedError : Error {
  using Error::Error;
};

/// Nonpositive or otherwise invalid physical parameters.
struct InvalidParamsError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct SingularCovarianceError : Error {
  using Error::Error;
};

/// On-off parameters do not satisfy the power-consistency relation.
struct ConfigInconsistentError : Error {
  using Error::Error;
};

/// Requested codebook exceeds the exhaustive-decoding cap.
struct TooManyMessagesError : Error {
  using Error::Error;
};

struct BadMessageError : Error {
  using Error::Error;
};

/// Malformed experiment configuration (names the offending field).
struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace heatchan
