#pragma once

#include <stdexcept>
#include <string>

namespace mipt {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boson number outside [0, n_sites] or an unusable site count.
class InvalidFilling : public Error {
 public:
  using Error::Error;
};

/// Occupation pattern does not match the basis (length, weight, characters).
class PatternMismatch : public Error {
 public:
  using Error::Error;
};

/// Operator/state dimensions disagree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The post-selection weight dropped below the floor: the retained
/// measurement record has probability zero and the nonlinear term is
/// undefined.
class DenominatorVanished : public Error {
 public:
  using Error::Error;
};

/// A density-matrix invariant (trace, Hermiticity, positivity) failed
/// beyond tolerance during evolution. Carries the offending step.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& what, long step)
      : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Tr(rho^2) <= 0: the input is numerically corrupted.
class NonPositivePurity : public Error {
 public:
  using Error::Error;
};

/// The swap trace has a non-negligible imaginary part or is non-positive.
class NonPositiveSwapTrace : public Error {
 public:
  using Error::Error;
};

/// A sampled quantum jump annihilated the state. Unreachable when channels
/// are drawn with probability proportional to their weight.
class ZeroNormAfterJump : public Error {
 public:
  using Error::Error;
};

/// Trajectory records do not share one time grid.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// An outcome ensemble violates its normalization or state invariants.
class InvalidEnsemble : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. line() is >= 1 when the error points at a
/// config-file line, -1 for cross-field validation failures.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, long line = -1)
      : Error(line >= 1 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace mipt
