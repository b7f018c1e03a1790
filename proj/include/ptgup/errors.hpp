#pragma once

#include <stdexcept>
#include <string>

namespace ptgup {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model parameter outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Hermite degree above the configured maximum.
class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

/// Gauss-Hermite order outside [1, 256].
class OrderOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Normal-mode data was withheld (isotropic system with nonzero coupling).
class ModesUnavailable : public Error {
 public:
  using Error::Error;
};

/// A first-order denominator vanished; the message names the offending pair.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Sample grid is not symmetric under the requested parity.
class AsymmetricGrid : public Error {
 public:
  using Error::Error;
};

/// Oscillator reference basis needs strictly positive frequencies.
class ZeroFrequency : public Error {
 public:
  using Error::Error;
};

/// Basis cutoff below the supported minimum.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

/// Dense eigensolver failed to converge or produced bad residuals.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Requested matrix size exceeds the configured resource guard.
class ResourceGuard : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue tracking lost the state (overlap below threshold).
class TrackingAmbiguous : public Error {
 public:
  using Error::Error;
};

/// Quadrature path requires real mode parameters; use the ladder path.
class BrokenPhaseUnsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace ptgup
