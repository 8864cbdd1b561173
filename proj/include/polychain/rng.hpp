#pragma once

#include <array>
#include <cstdint>

namespace polychain {

/**
 * @brief Counter-based pseudorandom kernel: Philox 4x64, 10 rounds.
 *
 * A block is a pure function of (counter, key); there is no hidden state, so
 * any (stream, index) position can be generated independently, in any order,
 * from any thread. Langevin noise uses key = (seed, stream) and
 * counter = (index, 0, 0, 0).
 */
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

/// Map a 64-bit word to the open interval (0,1): ((x >> 12) + 0.5) * 2^-52.
double u64_to_unit_open(std::uint64_t x);

/**
 * @brief One standard normal per (seed, stream, index).
 *
 * Box-Muller on lanes 0 and 1 of the Philox block with key (seed, stream) at
 * counter (index, 0, 0, 0); the cosine branch is returned. One block per
 * variate keeps the mapping position -> value stateless and reproducible
 * independent of evaluation order or thread count.
 *
 * Stream-splitting rule used by the chain driver: stream = k * (n^2 - 1) + a
 * for link index k (0-based) and generator index a (0-based); index is the
 * global step number. The reduced integrator uses stream 0.
 */
double normal_variate(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Convenience handle for a fixed (seed, stream) normal sequence.
struct NormalStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double operator()(std::uint64_t index) const { return normal_variate(seed, stream, index); }
};

}  // namespace polychain
