#include "polychain/rng.hpp"

#include <cmath>

namespace polychain {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    if (round) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c[0], hi0, lo0);
    mulhilo(kMult1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double u64_to_unit_open(std::uint64_t x) {
  // 52 bits keep both endpoints representable: min 2^-53, max 1 - 2^-53.
  // A 53-bit variant can round to exactly 1.0 at the top of the range.
  return (static_cast<double>(x >> 12) + 0.5) * 0x1p-52;
}

double normal_variate(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto out = philox4x64({index, 0, 0, 0}, {seed, stream});
  const double u1 = u64_to_unit_open(out[0]);
  const double u2 = u64_to_unit_open(out[1]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace polychain
