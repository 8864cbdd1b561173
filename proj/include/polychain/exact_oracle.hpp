#pragma once

#include <complex>

namespace polychain {

using Complex = std::complex<double>;

/// Uniform tensor grid on the torus; the trapezoid rule is spectrally
/// accurate for smooth periodic integrands, so 256-512 points per dimension
/// reach full double precision at the couplings of interest.
struct QuadratureSpec {
  int points_per_dim = 512;
};

/**
 * @brief Deterministic group-integral value of <tr(U^k)> for SU(3) under the
 * weight e^{beta1 tr U + beta2 tr U^-1}.
 *
 * Reduction to eigen-angles: U ~ diag(e^{i phi_1}, e^{i phi_2},
 * e^{-i(phi_1+phi_2)}) with the squared-Vandermonde measure |V|^2,
 * V = (z_2-z_1)(z_3-z_1)(z_3-z_2). The expectation is the ratio of two 2D
 * quadratures sharing the (complex) weight. Parallel over phi_1 rows with
 * per-row partial sums combined in row order, so results are identical to
 * the serial variant bit for bit and independent of thread count.
 */
Complex su3_expectation(int k, Complex beta1, Complex beta2, const QuadratureSpec& quad);

/// Serial reference implementation with the same summation tree.
Complex su3_expectation_serial(int k, Complex beta1, Complex beta2, const QuadratureSpec& quad);

/**
 * @brief SU(2) analogue: <2 cos(k s)> under weight e^{2 beta cos s} sin^2 s
 * on (-pi, pi]. Complex beta continues the weight analytically (the contour
 * stays real).
 */
Complex su2_expectation(int k, Complex beta, const QuadratureSpec& quad);

/// Serial reference implementation with the same summation tree.
Complex su2_expectation_serial(int k, Complex beta, const QuadratureSpec& quad);

}  // namespace polychain
