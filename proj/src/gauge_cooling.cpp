#include "polychain/gauge_cooling.hpp"

#include <cmath>
#include <stdexcept>

namespace polychain {

namespace {

ComplexMatrix cooling_loop_product(const LinkConfig& config) {
  // Cooling diagonalizes the product in the order U_N U_1 ... U_{N-1}.
  const int N = config.num_links();
  ComplexMatrix p = config.links[N - 1];
  for (int k = 0; k + 1 < N; ++k) p = (p * config.links[k]).eval();
  return p;
}

}  // namespace

CoolingOutcome cool_optimal(const LinkConfig& config) {
  const int n = config.n;
  const int N = config.num_links();
  CoolingOutcome out;
  out.delta_f_before = unitarity_distance(config);
  out.spectrum = eig(cooling_loop_product(config));
  const auto& mu = out.spectrum->values;

  ComplexMatrix balanced = ComplexMatrix::Zero(n, n);
  ComplexMatrix last = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double r = std::abs(mu[j]);
    balanced(j, j) = std::pow(r, 1.0 / N);
    last(j, j) = mu[j] * std::pow(r, -(N - 1.0) / N);
  }
  out.cooled.n = n;
  out.cooled.links.assign(N - 1, balanced);
  out.cooled.links.push_back(last);
  out.delta_f_after = unitarity_distance(out.cooled);
  return out;
}

Eigen::MatrixXd gradient(const LinkConfig& config) {
  const int n = config.n;
  const int N = config.num_links();
  const int dim = n * n - 1;
  const GeneratorBasis& basis = generator_basis(n);
  Eigen::MatrixXd g(dim, N);
  for (int k = 0; k < N; ++k) {
    const int prev = (k + N - 1) % N;
    const ComplexMatrix diff = config.links[k] * config.links[k].adjoint() -
                               config.links[prev].adjoint() * config.links[prev];
    const ComplexMatrix dt_ = diff.transpose();
    for (int a = 0; a < dim; ++a)
      g(a, k) = 2.0 * basis.generators[a].cwiseProduct(dt_).sum().real();
  }
  return g;
}

CoolingOutcome cool_gradient(const LinkConfig& config, double alpha, double dt, int iters) {
  const int n = config.n;
  const int N = config.num_links();
  const int dim = n * n - 1;
  const GeneratorBasis& basis = generator_basis(n);
  CoolingOutcome out;
  out.delta_f_before = unitarity_distance(config);
  out.cooled = config;
  const double step = alpha * dt;

  std::vector<ComplexMatrix> epos(N), eneg(N);
  for (int it = 0; it < iters; ++it) {
    const Eigen::MatrixXd y = -step * gradient(out.cooled);
    if (!y.allFinite())
      throw std::runtime_error("cool_gradient: non-finite descent step (step size too large?)");
    // exceptions must not escape an OpenMP region; capture and rethrow
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
      try {
        ComplexMatrix h = ComplexMatrix::Zero(n, n);
        for (int a = 0; a < dim; ++a) h += y(a, k) * basis.generators[a];
        epos[k] = expm(h);
        eneg[k] = expm(-h);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k)
      out.cooled.links[k] = epos[k] * out.cooled.links[k] * eneg[(k + 1) % N];
  }
  out.delta_f_after = unitarity_distance(out.cooled);
  return out;
}

double hessian_form(const LinkConfig& config, const Eigen::MatrixXd& v) {
  const int n = config.n;
  const int N = config.num_links();
  const int dim = n * n - 1;
  const GeneratorBasis& basis = generator_basis(n);
  std::vector<ComplexMatrix> m(N);
  for (int k = 0; k < N; ++k) {
    m[k] = ComplexMatrix::Zero(n, n);
    for (int a = 0; a < dim; ++a) m[k] += v(a, k) * basis.generators[a];
  }
  double r = 0;
  for (int k = 0; k < N; ++k) {
    const ComplexMatrix d = config.links[k] * m[(k + 1) % N] - m[k] * config.links[k];
    r += 4.0 * d.squaredNorm();
  }
  return r;
}

CoolingOutcome apply_cooling(const LinkConfig& config, const CoolingStrategy& strategy,
                             double dt) {
  if (std::holds_alternative<Optimal>(strategy)) return cool_optimal(config);
  if (const auto* gd = std::get_if<GradientDescent>(&strategy))
    return cool_gradient(config, gd->alpha, dt, gd->iters);
  CoolingOutcome out;
  out.cooled = config;
  out.delta_f_before = out.delta_f_after = unitarity_distance(config);
  return out;
}

}  // namespace polychain
