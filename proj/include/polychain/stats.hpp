#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace polychain {

/// Streaming mean/variance (Welford) — no sample storage.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Componentwise streaming statistics for complex samples.
struct ComplexStats {
  RunningStats re, im;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::uint64_t count() const { return re.count; }
  std::complex<double> mean() const { return {re.mean, im.mean}; }
  std::complex<double> std_error() const { return {re.std_error(), im.std_error()}; }
};

}  // namespace polychain
