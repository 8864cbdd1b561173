#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace polychain {

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/**
 * @brief The n^2 - 1 Hermitian traceless generators of su(n).
 *
 * Normalization tr(lambda_a lambda_b) = 2 delta_ab. Ordering: the su(n-1)
 * basis embedded in the top-left block first, then for each row j < n-1 the
 * new off-diagonal pair coupling j to the last index (real part, then
 * imaginary part), and the diagonal generator sqrt(2/(n(n-1)))*diag(1,..,1,1-n)
 * last. The imaginary pair members carry +i above the diagonal:
 * lambda_2 = [[0, i], [-i, 0]] for n = 2.
 */
struct GeneratorBasis {
  int dim = 0;
  std::vector<ComplexMatrix> generators;
};

/// Build (or fetch from a process-wide cache) the basis for su(n). n >= 2.
const GeneratorBasis& generator_basis(int n);

/**
 * @brief Eigendecomposition of a small (n <= 4) complex matrix.
 *
 * Eigenvalues are sorted by descending modulus, ties broken by ascending
 * argument in (-pi, pi], so downstream consumers are deterministic. Q is
 * rescaled to unit determinant. When the smallest eigenvalue gap drops below
 * 1e-10 * ||M||_F the `diagonalizable` flag is cleared but the (possibly
 * ill-conditioned) decomposition is still returned.
 */
struct Spectrum {
  Eigen::VectorXcd values;
  ComplexMatrix basis;  // Q with det Q = 1; M ~= Q diag(values) Q^-1
  bool diagonalizable = true;
};

/// Matrix exponential via scaling-and-squaring with a Taylor core.
/// Relative error <= 1e-10 for ||M||_F <= 10. Throws on non-finite input.
ComplexMatrix expm(const ComplexMatrix& m);

/// See Spectrum. Throws std::invalid_argument for dim > 4 or non-finite input.
Spectrum eig(const ComplexMatrix& m);

/// True when every entry of m is finite.
bool is_finite(const ComplexMatrix& m);

}  // namespace polychain
