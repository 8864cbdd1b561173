#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "polychain/langevin.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "polychain/exact_oracle.hpp"

using namespace polychain;

namespace {

ChainParams herm_params(int n, int N, Complex beta1) {
  ChainParams p;
  p.n = n;
  p.N = N;
  p.beta1 = beta1;
  p.beta2 = std::conj(beta1);
  return p;
}

}  // namespace

TEST_CASE("euler_step preserves unit determinants") {
  std::mt19937_64 gen(60);
  std::normal_distribution<double> dist;
  const ChainParams p = herm_params(3, 4, Complex(2.0, 0.0));
  LinkConfig config = LinkConfig::identity(3, 4);
  Eigen::MatrixXd noise(8, 4);
  for (int step = 0; step < 50; ++step) {
    for (int a = 0; a < 8; ++a)
      for (int k = 0; k < 4; ++k) noise(a, k) = dist(gen);
    config = euler_step(p, config, 1e-3, noise);
  }
  for (const auto& u : config.links)
    CHECK(std::abs(u.determinant() - Complex(1, 0)) < 1e-12);
}

TEST_CASE("runs are bit-identical under a fixed seed") {
  const ChainParams p = herm_params(2, 4, Complex(1.0, 0.0));
  Schedule s;
  s.dt = 1e-3;
  s.burn_in_time = 0.05;
  s.sample_interval = 0.01;
  s.num_samples = 50;
  s.seed = 12345;
  const ChainReport a = run_chain(p, s, Optimal{}, {1, 2});
  const ChainReport b = run_chain(p, s, Optimal{}, {1, 2});
  CHECK(a.estimates.at(1).mean() == b.estimates.at(1).mean());
  CHECK(a.estimates.at(2).mean() == b.estimates.at(2).mean());
  REQUIRE(a.delta_f_series.size() == b.delta_f_series.size());
  for (std::size_t i = 0; i < a.delta_f_series.size(); ++i)
    CHECK(a.delta_f_series[i].second == b.delta_f_series[i].second);

  Schedule other = s;
  other.seed = 54321;
  const ChainReport c = run_chain(p, other, Optimal{}, {1});
  CHECK(c.estimates.at(1).mean() != a.estimates.at(1).mean());
}

TEST_CASE("sampling accounting follows the schedule") {
  const ChainParams p = herm_params(2, 2, Complex(0.5, 0.0));
  Schedule s;
  s.dt = 1e-3;
  s.burn_in_time = 0.01;     // 10 steps
  s.sample_interval = 5e-3;  // every 5 steps
  s.num_samples = 20;
  s.seed = 7;
  s.record_samples = true;
  const ChainReport report = run_chain(p, s, Optimal{}, {1});
  CHECK(report.steps_taken == 110);
  CHECK(report.estimates.at(1).count() == 20);
  REQUIRE(report.samples.size() == 20);
  for (const auto& phases : report.samples) {
    REQUIRE(phases.size() == 2);
    for (double phi : phases) {
      CHECK(phi <= M_PI + 1e-12);
      CHECK(phi > -M_PI - 1e-12);
    }
    // det P = 1: phases sum to 0 mod 2 pi
    const double sum = phases[0] + phases[1];
    CHECK(std::abs(std::remainder(sum, 2.0 * M_PI)) < 1e-9);
  }
  CHECK_FALSE(report.diverged);
  // chain runs leave the reduced-model fields zeroed
  CHECK_FALSE(report.escaped);
  CHECK(report.drift_cap_hits == 0);
  CHECK(report.y_max == 0.0);
}

TEST_CASE("a Hermitian action keeps the walk on the unitary manifold") {
  // beta2 = conj(beta1) makes the drift real, so even with no cooling the
  // links stay unitary up to roundoff accumulation.
  const ChainParams p = herm_params(2, 4, Complex(1.0, 0.5));
  Schedule s;
  s.dt = 1e-4;
  s.burn_in_time = 0.0;
  s.sample_interval = 1e-4;
  s.num_samples = 20000;
  s.seed = 99;
  const ChainReport report = run_chain(p, s, NoCooling{}, {1});
  CHECK_FALSE(report.diverged);
  REQUIRE(!report.delta_f_series.empty());
  for (const auto& [t, df] : report.delta_f_series) CHECK(df < 1e-10);
}

TEST_CASE("free diffusion equilibrates to a vanishing loop average") {
  ChainParams p;
  p.n = 2;
  p.N = 2;
  p.beta1 = p.beta2 = Complex(0, 0);
  Schedule s;
  s.dt = 1e-3;
  s.burn_in_time = 1.0;
  s.sample_interval = 0.05;
  s.num_samples = 2000;
  s.seed = 21;
  const ChainReport report = run_chain(p, s, NoCooling{}, {1});
  const Complex mean = report.estimates.at(1).mean();
  const Complex se = report.estimates.at(1).std_error();
  CHECK(std::abs(mean.real()) < 4.0 * se.real() + 1e-3);
  CHECK(std::abs(mean.imag()) < 4.0 * se.imag() + 1e-3);
}

TEST_CASE("divergence is flagged and the report is a clean partial") {
  // strongly complex coupling, coarse step, no cooling: the walk must leave
  // the group manifold and trip the threshold
  ChainParams p;
  p.n = 2;
  p.N = 2;
  p.beta1 = Complex(3.0, 3.0);
  p.beta2 = Complex(0.0, 0.0);
  Schedule s;
  s.dt = 5e-2;
  s.burn_in_time = 0.0;
  s.sample_interval = 5e-2;
  s.num_samples = 100000;
  s.seed = 5;
  const ChainReport report = run_chain(p, s, NoCooling{}, {1});
  CHECK(report.diverged);
  CHECK(report.steps_taken < 100000);
  REQUIRE(!report.delta_f_series.empty());
  const double last = report.delta_f_series.back().second;
  CHECK((last > 1e6 || !std::isfinite(last)));
}

TEST_CASE("one-link SU(2) chain reproduces the group-integral average") {
  const ChainParams p = herm_params(2, 1, Complex(1.0, 0.0));
  Schedule s;
  s.dt = 2e-4;  // the Euler bias at 1e-3 is already ~0.05 here
  s.burn_in_time = 1.0;
  s.sample_interval = 0.05;
  s.num_samples = 4000;
  s.seed = 31;
  const ChainReport report = run_chain(p, s, Optimal{}, {1});
  // the class-function weight picks up beta1 + beta2: e^{2(b1+b2) cos s} sin^2 s
  const Complex exact = su2_expectation(1, p.beta1 + p.beta2, {});
  const Complex mean = report.estimates.at(1).mean();
  // correlated samples put the effective standard error near 0.02; the bar is
  // a loose ~3 sigma sanity check (a wrong coupling convention misses by ~0.5)
  CHECK(std::abs(mean.real() - exact.real()) < 0.08);
  CHECK(std::abs(mean.imag()) < 0.02);
  CHECK(std::abs(exact.imag()) < 1e-12);
}
