#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "polychain/polyakov_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace polychain;

namespace {

// Random element of SL(n, C): exponential of a traceless matrix.
ComplexMatrix random_sl(int n, std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  const auto& basis = generator_basis(n);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& g : basis.generators) h += Complex(dist(gen), dist(gen)) * g;
  return expm(h);
}

// Random element of SU(n): exponential of i * (real combination of generators).
ComplexMatrix random_su(int n, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  const auto& basis = generator_basis(n);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& g : basis.generators) h += Complex(0.0, dist(gen)) * g;
  return expm(h);
}

LinkConfig random_config(int n, int N, std::mt19937_64& gen, double off_manifold = 0.0) {
  LinkConfig config = LinkConfig::identity(n, N);
  for (auto& u : config.links) {
    u = random_su(n, gen);
    if (off_manifold > 0.0) u = random_sl(n, gen, off_manifold) * u;
  }
  return config;
}

}  // namespace

TEST_CASE("hopping parameterization expands to the two couplings") {
  const ChainParams p = ChainParams::hopping(3, 16, Complex(2.0, 0.0), 0.1, 1.0);
  CHECK(p.n == 3);
  CHECK(p.N == 16);
  CHECK(p.beta1.real() == doctest::Approx(2.0 + 0.1 * std::exp(1.0)).epsilon(1e-14));
  CHECK(p.beta2.real() == doctest::Approx(2.0 + 0.1 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(p.beta1.imag() == 0.0);
  CHECK(p.beta2.imag() == 0.0);

  const ChainParams q = ChainParams::hopping(2, 4, Complex(1.0, 0.5), 0.2, -0.3);
  CHECK(q.beta1 == Complex(1.0, 0.5) + 0.2 * std::exp(-0.3));
  CHECK(q.beta2 == Complex(1.0, -0.5) + 0.2 * std::exp(0.3));
}

TEST_CASE("action on the identity configuration") {
  ChainParams p;
  p.n = 3;
  p.N = 5;
  p.beta1 = Complex(1.5, 0.25);
  p.beta2 = Complex(0.75, -1.0);
  const LinkConfig config = LinkConfig::identity(3, 5);
  // P = I so S = -(beta1 + beta2) * n
  const Complex expected = -(p.beta1 + p.beta2) * 3.0;
  CHECK(std::abs(action(p, config) - expected) < 1e-14);
}

TEST_CASE("action of a single diagonal SU(2) link") {
  ChainParams p;
  p.n = 2;
  p.N = 1;
  p.beta1 = Complex(2.0, 0.0);
  p.beta2 = Complex(0.5, 0.0);
  LinkConfig config = LinkConfig::identity(2, 1);
  const double theta = 0.6;
  config.links[0] = expm(Complex(0, theta) * generator_basis(2).generators[2]);
  // tr P = tr P^-1 = 2 cos(theta)
  const Complex expected = -(p.beta1 + p.beta2) * 2.0 * std::cos(theta);
  CHECK(std::abs(action(p, config) - expected) < 1e-13);
}

TEST_CASE("action rejects mismatched dimensions") {
  ChainParams p;
  p.n = 3;
  p.N = 2;
  CHECK_THROWS_AS(action(p, LinkConfig::identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(action(p, LinkConfig::identity(3, 4)), std::invalid_argument);
}

TEST_CASE("loop observable on diagonal configurations") {
  LinkConfig config = LinkConfig::identity(3, 1);
  CHECK(std::abs(loop_observable(config, 1) - Complex(3, 0)) < 1e-15);
  CHECK(std::abs(loop_observable(config, -2) - Complex(3, 0)) < 1e-15);

  const double a = 0.8, b = -0.45;
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = std::polar(1.0, a);
  d(1, 1) = std::polar(1.0, b);
  d(2, 2) = std::polar(1.0, -a - b);
  config.links[0] = d;
  for (int k : {1, 2, 3, -1, -3}) {
    const Complex expected = std::polar(1.0, k * a) + std::polar(1.0, k * b) +
                             std::polar(1.0, -k * (a + b));
    CHECK(std::abs(loop_observable(config, k) - expected) < 1e-13);
  }
  CHECK_THROWS_AS(loop_observable(config, 0), std::invalid_argument);
}

TEST_CASE("action and observables are invariant under complexified gauge transforms") {
  std::mt19937_64 gen(31337);
  std::uniform_int_distribution<int> pick_n(2, 3), pick_len(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = pick_n(gen);
    const int N = pick_len(gen);
    ChainParams p;
    p.n = n;
    p.N = N;
    p.beta1 = Complex(1.1, 0.4);
    p.beta2 = Complex(0.9, -0.2);
    const LinkConfig config = random_config(n, N, gen, 0.15);
    std::vector<ComplexMatrix> v(N);
    for (auto& m : v) m = random_sl(n, gen, 0.3);
    const LinkConfig moved = gauge_transform(config, v);

    CHECK(std::abs(action(p, moved) - action(p, config)) < 1e-10);
    CHECK(std::abs(loop_observable(moved, 1) - loop_observable(config, 1)) < 1e-10);
    CHECK(std::abs(loop_observable(moved, -2) - loop_observable(config, -2)) < 1e-10);
  }
}

TEST_CASE("gauge_transform rejects a non-unimodular transform") {
  const LinkConfig config = LinkConfig::identity(2, 2);
  std::vector<ComplexMatrix> v(2, ComplexMatrix::Identity(2, 2));
  v[1] *= 1.01;  // det = 1.0201
  CHECK_THROWS_AS(gauge_transform(config, v), std::invalid_argument);
}

TEST_CASE("analytic drift matches the finite-difference oracle") {
  std::mt19937_64 gen(4242);
  std::uniform_int_distribution<int> pick_n(2, 3), pick_len(1, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = pick_n(gen);
    const int N = pick_len(gen);
    ChainParams p;
    p.n = n;
    p.N = N;
    p.beta1 = Complex(2.1, 0.3);
    p.beta2 = Complex(1.7, -0.6);
    const LinkConfig config = random_config(n, N, gen, trial % 3 ? 0.0 : 0.1);
    const DriftTable analytic = drift(p, config);
    const DriftTable numeric = drift_finite_difference(p, config);
    REQUIRE(analytic.rows() == n * n - 1);
    REQUIRE(analytic.cols() == N);
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("drift is real on the unitary manifold when beta2 = conj(beta1)") {
  std::mt19937_64 gen(555);
  for (int trial = 0; trial < 20; ++trial) {
    ChainParams p;
    p.n = 3;
    p.N = 4;
    p.beta1 = Complex(2.0, 0.7);
    p.beta2 = std::conj(p.beta1);
    const LinkConfig config = random_config(3, 4, gen);
    const DriftTable table = drift(p, config);
    CHECK(table.imag().cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("unitarity distance vanishes on SU(n) and measures the escape") {
  std::mt19937_64 gen(808);
  const LinkConfig clean = random_config(3, 6, gen);
  const double residue = unitarity_distance(clean);
  CHECK(residue >= 0.0);  // negative roundoff fuzz is clamped
  CHECK(residue < 1e-12);
  CHECK(unitarity_distance(LinkConfig::identity(3, 6)) == 0.0);

  LinkConfig stretched = LinkConfig::identity(2, 1);
  stretched.links[0] << 2.0, 0.0, 0.0, 0.5;
  // ||U||^2 - n = 4 + 1/4 - 2
  CHECK(unitarity_distance(stretched) == doctest::Approx(2.25).epsilon(1e-14));

  LinkConfig pair = LinkConfig::identity(2, 2);
  pair.links[1] << 2.0, 0.0, 0.0, 0.5;
  CHECK(unitarity_distance(pair) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("repair_determinants renormalizes drifted links") {
  std::mt19937_64 gen(117);
  LinkConfig config = random_config(3, 3, gen);
  config.links[1] *= std::polar(1.0 + 3e-6, 1e-6);  // det drifts off 1
  REQUIRE(std::abs(config.links[1].determinant() - Complex(1, 0)) > 1e-8);
  repair_determinants(config);
  for (const auto& u : config.links)
    CHECK(std::abs(u.determinant() - Complex(1, 0)) < 1e-12);

  // within tolerance the links are left untouched
  LinkConfig other = random_config(2, 2, gen);
  const ComplexMatrix before = other.links[0];
  repair_determinants(other);
  CHECK((other.links[0] - before).norm() == 0.0);
}
