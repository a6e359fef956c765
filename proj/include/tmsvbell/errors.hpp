#pragma once

#include <stdexcept>
#include <string>

namespace tmsvbell {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Squeezing parameter exceeds the configured cap; the truncation would be
/// impractically large.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidTolerance : public Error {
 public:
  using Error::Error;
};

/// Requested dimension exceeds the two-mode oracle limit.
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A-posteriori quadrature certificate failed (node count or interval too
/// small for the requested levels).
class QuadratureInsufficient : public Error {
 public:
  using Error::Error;
};

/// Configurational matrix violates its declared unitarity tolerance.
class NonUnitaryConfig : public Error {
 public:
  using Error::Error;
};

class UnknownTag : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

}  // namespace tmsvbell
