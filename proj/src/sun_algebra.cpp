#include "polychain/sun_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace polychain {

namespace {

GeneratorBasis build_basis(int n, const std::map<int, GeneratorBasis>& cache) {
  GeneratorBasis basis;
  basis.dim = n;
  if (n == 2) {
    ComplexMatrix l1(2, 2), l2(2, 2), l3(2, 2);
    l1 << 0, 1, 1, 0;
    l2 << 0, Complex(0, 1), Complex(0, -1), 0;
    l3 << 1, 0, 0, -1;
    basis.generators = {l1, l2, l3};
    return basis;
  }
  // Recursive layout: embed su(n-1), append the 2(n-1) new off-diagonal
  // generators coupling each row j to the last index, then the diagonal one.
  const GeneratorBasis& lower = cache.at(n - 1);
  for (const auto& g : lower.generators) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.topLeftCorner(n - 1, n - 1) = g;
    basis.generators.push_back(std::move(m));
  }
  for (int j = 0; j < n - 1; ++j) {
    ComplexMatrix re = ComplexMatrix::Zero(n, n);
    re(j, n - 1) = 1;
    re(n - 1, j) = 1;
    basis.generators.push_back(std::move(re));
    ComplexMatrix im = ComplexMatrix::Zero(n, n);
    im(j, n - 1) = Complex(0, 1);
    im(n - 1, j) = Complex(0, -1);
    basis.generators.push_back(std::move(im));
  }
  ComplexMatrix diag = ComplexMatrix::Zero(n, n);
  const double scale = std::sqrt(2.0 / (static_cast<double>(n) * (n - 1)));
  for (int j = 0; j < n - 1; ++j) diag(j, j) = scale;
  diag(n - 1, n - 1) = scale * (1.0 - n);
  basis.generators.push_back(std::move(diag));
  return basis;
}

}  // namespace

const GeneratorBasis& generator_basis(int n) {
  if (n < 2) throw std::invalid_argument("generator_basis: need n >= 2");
  static std::map<int, GeneratorBasis> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  // Build bottom-up so each level can read its predecessor from the cache.
  for (int m = 2; m <= n; ++m)
    if (!cache.count(m)) cache.emplace(m, build_basis(m, cache));
  return cache.at(n);
}

bool is_finite(const ComplexMatrix& m) {
  return m.array().isFinite().all();
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (!is_finite(m)) throw std::invalid_argument("expm: non-finite input");
  const Eigen::Index n = m.rows();
  const double norm = m.norm();
  // Scale so the Taylor argument has norm <= 0.25; 16 terms then leave a
  // truncation error far below 1e-16 before squaring back.
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  const ComplexMatrix a = m / std::ldexp(1.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 16; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

Spectrum eig(const ComplexMatrix& m) {
  if (m.rows() > 4) throw std::invalid_argument("eig: dim > 4 unsupported");
  if (!is_finite(m)) throw std::invalid_argument("eig: non-finite input");
  const Eigen::Index n = m.rows();
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig: solver failed");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const double ai = std::abs(vals[i]), aj = std::abs(vals[j]);
    if (ai != aj) return ai > aj;
    return std::arg(vals[i]) < std::arg(vals[j]);
  });

  Spectrum spec;
  spec.values.resize(n);
  spec.basis.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    spec.values[i] = vals[order[i]];
    spec.basis.col(i) = solver.eigenvectors().col(order[i]);
  }

  // Rescale Q to unit determinant via the principal n-th root.
  const Complex det = spec.basis.determinant();
  if (std::abs(det) > 0) {
    const Complex root = std::pow(det, 1.0 / static_cast<double>(n));
    spec.basis /= root;
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      min_gap = std::min(min_gap, std::abs(spec.values[i] - spec.values[j]));
  spec.diagonalizable = min_gap >= 1e-10 * m.norm();
  return spec;
}

}  // namespace polychain
