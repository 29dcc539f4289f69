#pragma once

#include <stdexcept>
#include <string>

namespace expode {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degree or node count outside the supported range.
class InvalidDegree : public Error {
 public:
  using Error::Error;
};

/// Polynomial index outside 0..n (or 1..n where j = 0 is meaningless).
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on a user-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IllConditionedBasis : public Error {
 public:
  IllConditionedBasis(int degree, double residual);

  int degree() const noexcept { return degree_; }
  double residual() const noexcept { return residual_; }

 private:
  int degree_;
  double residual_;
};

/// The right-hand side produced a NaN or infinity.
class NonFiniteState : public Error {
 public:
  NonFiniteState(int stage, double time);

  /// Stage index (0-based) whose evaluation went non-finite.
  int stage() const noexcept { return stage_; }
  double time() const noexcept { return time_; }

 private:
  int stage_;
  double time_;
};

class NewtonDivergence : public Error {
 public:
  NewtonDivergence(int iterations, double residual_norm);

  int iterations() const noexcept { return iterations_; }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  int iterations_;
  double residual_norm_;
};

class StepSizeUnderflow : public Error {
 public:
  StepSizeUnderflow(double time, double step);

  double time() const noexcept { return time_; }
  double step() const noexcept { return step_; }

 private:
  double time_;
  double step_;
};

class FiniteTimeBlowup : public Error {
 public:
  explicit FiniteTimeBlowup(double time);

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Unknown name in a catalog.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// No zero of a weighted exponential polynomial lies in (0, 1) in x = exp(-t).
class NoValidZero : public Error {
 public:
  using Error::Error;
};

/// Raised by internal cross-checks that must never fire on correct code.
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace expode
