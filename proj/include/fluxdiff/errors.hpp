#pragma once

#include <stdexcept>
#include <string>

namespace fluxdiff {

// All library failures derive from Error so callers can catch them uniformly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-positive density or pressure, or an invalid entropy-variable state.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// Arguments outside a mathematical function's domain (log mean of equal
// values in the reference formula, zero normal vectors, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid construction parameters (degree out of range, q < p, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Inconsistent scheme configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperatorError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

// Non-finite state detected during time integration.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Timing could not be measured reliably.
class BenchmarkError : public Error {
 public:
  using Error::Error;
};

}  // namespace fluxdiff
