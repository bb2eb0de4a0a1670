#pragma once

#include <stdexcept>
#include <string>

namespace ecd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotUnitaryError : public Error {
 public:
  using Error::Error;
};

/// Invalid physical or numerical parameter (non-positive frequency, negative delay, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite Hamiltonian sample encountered during propagation.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Spectral gap below the floor while building a SpectralFrame.
class NearDegeneracyError : public Error {
 public:
  NearDegeneracyError(double lambda, double gap);
  double lambda() const { return lambda_; }
  double gap() const { return gap_; }

 private:
  double lambda_;
  double gap_;
};

/// Degenerate pair inside one sector while evaluating the counterdiabatic field.
class DegeneracyError : public Error {
 public:
  DegeneracyError(double lambda, double gap);
  double lambda() const { return lambda_; }
  double gap() const { return gap_; }

 private:
  double lambda_;
  double gap_;
};

/// Eigenphase of a one-period propagator too close to the principal-log branch cut.
class BranchCutError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecd
