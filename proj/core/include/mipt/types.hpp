#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mipt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Default tolerances used by the invariant checks and the nonlinear
/// normalization guards.
namespace tol {
inline constexpr double trace = 1e-8;
inline constexpr double hermiticity = 1e-10;
inline constexpr double positivity = 1e-8;     // min eigenvalue >= -positivity
inline constexpr double completeness = 1e-12;  // |sum_a L_a^+ L_a - I|_max
inline constexpr double denominator = 1e-12;   // post-selection weight floor
inline constexpr double swap_imag = 1e-8;      // imag part of the swap trace
}  // namespace tol

}  // namespace mipt
