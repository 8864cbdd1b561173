#include "polychain/exact_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace polychain {

namespace {

// One phi_1 row of the SU(3) double integral: serial inner loop over phi_2.
void su3_row(int i, int p, int k, Complex beta1, Complex beta2, Complex& num, Complex& den) {
  const double h = 2.0 * M_PI / p;
  const double phi1 = -M_PI + i * h;
  num = den = Complex(0, 0);
  for (int j = 0; j < p; ++j) {
    const double phi2 = -M_PI + j * h;
    const double phi3 = -phi1 - phi2;
    const Complex z1 = std::polar(1.0, phi1);
    const Complex z2 = std::polar(1.0, phi2);
    const Complex z3 = std::polar(1.0, phi3);
    const Complex v = (z2 - z1) * (z3 - z1) * (z3 - z2);
    const Complex w = std::exp(beta1 * (z1 + z2 + z3) + beta2 * (1.0 / z1 + 1.0 / z2 + 1.0 / z3)) *
                      std::norm(v);
    const Complex obs = std::polar(1.0, k * phi1) + std::polar(1.0, k * phi2) +
                        std::polar(1.0, k * phi3);
    num += w * obs;
    den += w;
  }
}

Complex su3_impl(int k, Complex beta1, Complex beta2, const QuadratureSpec& quad, bool parallel) {
  if (k == 0) throw std::invalid_argument("su3_expectation: k must be nonzero");
  if (quad.points_per_dim < 64) throw std::invalid_argument("quadrature grid too coarse");
  const int p = quad.points_per_dim;
  std::vector<Complex> num(p), den(p);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < p; ++i) su3_row(i, p, k, beta1, beta2, num[i], den[i]);
  } else {
    for (int i = 0; i < p; ++i) su3_row(i, p, k, beta1, beta2, num[i], den[i]);
  }
  Complex total_num(0, 0), total_den(0, 0);
  for (int i = 0; i < p; ++i) {  // fixed-order combine: thread-count invariant
    total_num += num[i];
    total_den += den[i];
  }
  return total_num / total_den;
}

Complex su2_impl(int k, Complex beta, const QuadratureSpec& quad, bool parallel) {
  if (k == 0) throw std::invalid_argument("su2_expectation: k must be nonzero");
  if (quad.points_per_dim < 64) throw std::invalid_argument("quadrature grid too coarse");
  const int p = quad.points_per_dim;
  const double h = 2.0 * M_PI / p;
  std::vector<Complex> num(p), den(p);
  auto point = [&](int i) {
    const double s = -M_PI + i * h;
    const double sin_s = std::sin(s);
    const Complex w = std::exp(2.0 * beta * std::cos(s)) * (sin_s * sin_s);
    num[i] = w * (2.0 * std::cos(k * s));
    den[i] = w;
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < p; ++i) point(i);
  } else {
    for (int i = 0; i < p; ++i) point(i);
  }
  Complex total_num(0, 0), total_den(0, 0);
  for (int i = 0; i < p; ++i) {
    total_num += num[i];
    total_den += den[i];
  }
  return total_num / total_den;
}

}  // namespace

Complex su3_expectation(int k, Complex beta1, Complex beta2, const QuadratureSpec& quad) {
  return su3_impl(k, beta1, beta2, quad, /*parallel=*/true);
}

Complex su3_expectation_serial(int k, Complex beta1, Complex beta2, const QuadratureSpec& quad) {
  return su3_impl(k, beta1, beta2, quad, /*parallel=*/false);
}

Complex su2_expectation(int k, Complex beta, const QuadratureSpec& quad) {
  return su2_impl(k, beta, quad, /*parallel=*/true);
}

Complex su2_expectation_serial(int k, Complex beta, const QuadratureSpec& quad) {
  return su2_impl(k, beta, quad, /*parallel=*/false);
}

}  // namespace polychain
