#pragma once

#include <stdexcept>
#include <string>

namespace stqc {

/// Base class of every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad parameter, wrong dimension...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Periodic translation would wrap a significant fraction of the mass.
class WrapAroundRisk : public Error {
 public:
  WrapAroundRisk(double boundary_mass, double threshold);
  double boundary_mass;
};

/// The box is too small for the requested dilation (output mass reaches the edge).
class SupportOverflow : public Error {
 public:
  SupportOverflow(double boundary_mass, double threshold, const std::string& where);
  double boundary_mass;
};

/// The quadratic chirp of the free-propagator kernel is not resolved by the grid.
class ChirpAliasing : public Error {
 public:
  using Error::Error;
};

/// The (a, b, zeta) Riccati system left its configured bound before the end time.
class BlowUp : public Error {
 public:
  explicit BlowUp(double time);
  double time;
};

class FitFailed : public Error {
 public:
  using Error::Error;
};

/// 1 + 4as vanishes (within tolerance) in the free-past-phase commutation.
class ResonantPair : public Error {
 public:
  ResonantPair(double s, double a);
  double s;
  double a;
};

class StiffSegment : public Error {
 public:
  StiffSegment(std::size_t segment, double substeps);
  std::size_t segment;
  double substeps;
};

class BumpRangeError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double duration, double budget);
  double duration;
  double budget;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(double best_error, double tol);
  double best_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stqc
