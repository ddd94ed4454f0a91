#pragma once

#include <stdexcept>
#include <string>

namespace hiqec {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Vector length is not a power of two, or lengths disagree across arguments.
class DimensionError : public Error {
public:
  using Error::Error;
};

// A scalar parameter is out of its valid range (sigma <= 0, eta outside
// [0,1], p >= p_th, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

// A value-level invariant failed (state norm, rejected input file, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

// No distance assignment satisfies the error budget within [d_min, d_max].
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string &msg, int binding_qubit = -1)
      : Error(msg), binding_qubit(binding_qubit) {}

  // Qubit with the largest noise sensitivity (needs the largest code
  // distance), or -1 when not applicable.
  int binding_qubit;
};

// The request exceeds a hard resource bound (dense oracle for large n).
class ResourceError : public Error {
public:
  using Error::Error;
};

// Not enough usable data points for a least-squares fit.
class FitError : public Error {
public:
  using Error::Error;
};

// Sensitivity coefficients are undefined because the noiseless expectation
// value vanishes.
class SensitivityError : public Error {
public:
  using Error::Error;
};

} // namespace hiqec
