#pragma once

#include <complex>
#include <vector>

#include "polychain/sun_algebra.hpp"

namespace polychain {

/// Couplings of the periodic chain: S({U}) = -tr(beta1 U_1...U_N + beta2 U_N^-1...U_1^-1).
struct ChainParams {
  int n = 2;  // group dimension
  int N = 1;  // number of links
  Complex beta1{0.0, 0.0};
  Complex beta2{0.0, 0.0};

  /// Helper parameterization beta1 = beta + kappa e^mu, beta2 = conj(beta) + kappa e^-mu.
  static ChainParams hopping(int n, int N, Complex beta, double kappa, double mu);
};

/// Ordered links U_1..U_N on the unit-determinant manifold.
struct LinkConfig {
  int n = 2;
  std::vector<ComplexMatrix> links;

  int num_links() const { return static_cast<int>(links.size()); }
  static LinkConfig identity(int n, int N);
};

/// Drift entries K_{ak} indexed by generator a (row) and link k (column).
using DriftTable = Eigen::MatrixXcd;

/// S({U}) as above. Throws on dimension mismatch.
Complex action(const ChainParams& params, const LinkConfig& config);

/// tr(P^k) with P = U_1...U_N; negative k uses the inverse loop. k != 0.
Complex loop_observable(const LinkConfig& config, int k);

/**
 * @brief Analytic Lie derivative of the action.
 *
 * K_{ak} = -i beta1 tr(lambda_a R_k) + i beta2 tr(lambda_a R_k^-1) with
 * R_k = U_k...U_N U_1...U_{k-1}; all R_k come from cached prefix/suffix
 * products (O(N) matrix multiplies per table).
 */
DriftTable drift(const ChainParams& params, const LinkConfig& config);

/// Finite-difference evaluation of the same derivative (test oracle only).
DriftTable drift_finite_difference(const ChainParams& params, const LinkConfig& config,
                                   double eps = 1e-5);

/// U~_k = V_k^-1 U_k V_{k+1} with V_{N+1} = V_1. Each V_k must have unit determinant.
LinkConfig gauge_transform(const LinkConfig& config, const std::vector<ComplexMatrix>& v);

/// Delta F = sum_k ||U_k||_F^2 - N n, clamped to 0 when within -1e-9.
double unitarity_distance(const LinkConfig& config);

/// Renormalize any link with |det - 1| > tol by det^(-1/n) (principal root).
void repair_determinants(LinkConfig& config, double tol = 1e-8);

}  // namespace polychain
