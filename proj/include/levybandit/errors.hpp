#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace levybandit {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed problem document (wrong JSON shape, unknown or missing fields).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Input outside its mathematical domain (e.g. sigma = 0 with a nonzero
// continuous observation, boundary form requested without a drift gap).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Scalar argument outside its admissible range (probabilities, NaN).
class RangeError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: root bracketing impossible, confidence-interval breach.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Simulation configuration violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Probabilities are validated at API boundaries; NaN never passes.
inline double require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw RangeError(std::string(what) + " must lie in [0,1], got " +
                     std::to_string(p));
  }
  return p;
}

inline double require_open_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RangeError(std::string(what) + " must lie in (0,1), got " +
                     std::to_string(p));
  }
  return p;
}

}  // namespace levybandit
