#include "polychain/polyakov_model.hpp"

#include <cmath>
#include <stdexcept>

namespace polychain {

ChainParams ChainParams::hopping(int n, int N, Complex beta, double kappa, double mu) {
  ChainParams p;
  p.n = n;
  p.N = N;
  p.beta1 = beta + kappa * std::exp(mu);
  p.beta2 = std::conj(beta) + kappa * std::exp(-mu);
  return p;
}

LinkConfig LinkConfig::identity(int n, int N) {
  LinkConfig c;
  c.n = n;
  c.links.assign(N, ComplexMatrix::Identity(n, n));
  return c;
}

namespace {

void check_dims(const ChainParams& params, const LinkConfig& config) {
  if (params.n != config.n || params.N != config.num_links())
    throw std::invalid_argument("chain params/config dimension mismatch");
}

ComplexMatrix loop_product(const LinkConfig& config) {
  const int n = config.n;
  ComplexMatrix p = ComplexMatrix::Identity(n, n);
  for (const auto& u : config.links) p = (p * u).eval();
  return p;
}

}  // namespace

Complex action(const ChainParams& params, const LinkConfig& config) {
  check_dims(params, config);
  const ComplexMatrix p = loop_product(config);
  return -(params.beta1 * p.trace() + params.beta2 * p.inverse().trace());
}

Complex loop_observable(const LinkConfig& config, int k) {
  if (k == 0) throw std::invalid_argument("loop_observable: k must be nonzero");
  ComplexMatrix p = loop_product(config);
  if (k < 0) p = p.inverse().eval();
  ComplexMatrix pk = ComplexMatrix::Identity(config.n, config.n);
  for (int i = 0; i < std::abs(k); ++i) pk = (pk * p).eval();
  return pk.trace();
}

DriftTable drift(const ChainParams& params, const LinkConfig& config) {
  check_dims(params, config);
  const int n = params.n;
  const int N = params.N;
  const int dim = n * n - 1;
  const GeneratorBasis& basis = generator_basis(n);

  // prefix[k] = U_1..U_k, suffix[k] = U_k..U_N (identity at the empty ends)
  std::vector<ComplexMatrix> prefix(N + 1), suffix(N + 2);
  prefix[0] = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= N; ++k) prefix[k] = prefix[k - 1] * config.links[k - 1];
  suffix[N + 1] = ComplexMatrix::Identity(n, n);
  for (int k = N; k >= 1; --k) suffix[k] = config.links[k - 1] * suffix[k + 1];

  DriftTable table(dim, N);
#pragma omp parallel for schedule(static)
  for (int k = 1; k <= N; ++k) {
    const ComplexMatrix r = suffix[k] * prefix[k - 1];
    const ComplexMatrix rt = r.transpose();
    const ComplexMatrix rit = r.inverse().transpose().eval();
    for (int a = 0; a < dim; ++a) {
      // tr(A B) = sum_ij A_ij B_ji, evaluated entrywise against B^T
      const Complex t1 = basis.generators[a].cwiseProduct(rt).sum();
      const Complex t2 = basis.generators[a].cwiseProduct(rit).sum();
      table(a, k - 1) = Complex(0, -1) * params.beta1 * t1 + Complex(0, 1) * params.beta2 * t2;
    }
  }
  return table;
}

DriftTable drift_finite_difference(const ChainParams& params, const LinkConfig& config,
                                   double eps) {
  check_dims(params, config);
  const int dim = params.n * params.n - 1;
  const GeneratorBasis& basis = generator_basis(params.n);
  DriftTable table(dim, params.N);
  for (int k = 0; k < params.N; ++k) {
    for (int a = 0; a < dim; ++a) {
      // D_{ak} f({U}) = d/de f(.., e^{i e lambda_a} U_k, ..) at e = 0 (central)
      LinkConfig plus = config, minus = config;
      const ComplexMatrix step = expm(Complex(0, eps) * basis.generators[a]);
      const ComplexMatrix step_inv = expm(Complex(0, -eps) * basis.generators[a]);
      plus.links[k] = step * config.links[k];
      minus.links[k] = step_inv * config.links[k];
      table(a, k) = (action(params, plus) - action(params, minus)) / (2.0 * eps);
    }
  }
  return table;
}

LinkConfig gauge_transform(const LinkConfig& config, const std::vector<ComplexMatrix>& v) {
  const int N = config.num_links();
  if (static_cast<int>(v.size()) != N)
    throw std::invalid_argument("gauge_transform: need one V per link");
  for (const auto& m : v)
    if (std::abs(m.determinant() - 1.0) > 1e-8)
      throw std::invalid_argument("gauge_transform: V_k must have unit determinant");
  LinkConfig out = config;
  for (int k = 0; k < N; ++k) out.links[k] = v[k].inverse() * config.links[k] * v[(k + 1) % N];
  return out;
}

double unitarity_distance(const LinkConfig& config) {
  double sum = 0;
  for (const auto& u : config.links) sum += u.squaredNorm();
  const double delta = sum - static_cast<double>(config.n) * config.num_links();
  if (delta < 0 && delta > -1e-9) return 0.0;
  return delta;
}

void repair_determinants(LinkConfig& config, double tol) {
  const double n = config.n;
  for (auto& u : config.links) {
    const Complex det = u.determinant();
    if (std::abs(det - 1.0) > tol) u *= std::pow(det, -1.0 / n);
  }
}

}  // namespace polychain
