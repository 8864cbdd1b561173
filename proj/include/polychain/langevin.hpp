#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "polychain/gauge_cooling.hpp"
#include "polychain/stats.hpp"

namespace polychain {

/// Time discretization and sampling plan shared by the chain and reduced drivers.
struct Schedule {
  double dt = 1e-4;
  double burn_in_time = 0;      // T
  double sample_interval = 0;   // Delta T; samples land at T + m Delta T, m >= 1
  std::uint64_t num_samples = 0;
  std::uint64_t seed = 0;
  int log_stride = 100;         // steps between recorded points of the Delta F series
  bool record_samples = false;  // opt-in: store per-sample state (phases or (x,y))
};

/// Everything a run produces. Reduced-SDE runs reuse this shape; the fields
/// that only make sense there (escaped, y_max, drift_cap_hits) stay zeroed
/// for chain runs and vice versa (spectrum phases).
struct ChainReport {
  std::map<int, ComplexStats> estimates;                // observable k -> stats
  std::vector<std::pair<double, double>> delta_f_series;  // (t, Delta F)
  std::vector<std::vector<double>> samples;             // per-sample state log
  bool diverged = false;
  bool escaped = false;
  std::uint64_t drift_cap_hits = 0;
  double y_max = 0;
  std::uint64_t steps_taken = 0;
  ChainParams params;
  Schedule schedule;
  CoolingStrategy strategy;
};

/**
 * @brief One forward-Euler update of every link.
 *
 * U_k <- exp(-i sum_a lambda_a (K_{ak} dt + eta_{ak} sqrt(2 dt))) U_k with the
 * drift table evaluated on the incoming configuration. The exponent is
 * traceless, so unit determinants survive exactly up to roundoff. The noise
 * table has shape (n^2-1, N); production runs draw it from the schedule seed,
 * tests may pass any table.
 */
LinkConfig euler_step(const ChainParams& params, const LinkConfig& config, double dt,
                      const Eigen::MatrixXd& noise);

/**
 * @brief Full complex Langevin run: burn-in, then sampling, with the chosen
 * cooling applied after every Euler step.
 *
 * Deterministic given the schedule seed (counter-based noise; see rng.hpp).
 * Aborts with `diverged` set when Delta F exceeds 1e6 or the state stops
 * being finite; the partial report keeps whatever was accumulated.
 */
ChainReport run_chain(const ChainParams& params, const Schedule& schedule,
                      const CoolingStrategy& strategy, const std::vector<int>& observable_ks);

}  // namespace polychain
