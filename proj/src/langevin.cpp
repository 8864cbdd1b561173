#include "polychain/langevin.hpp"

#include <cmath>
#include <limits>

#include "polychain/rng.hpp"

namespace polychain {

namespace {

constexpr double kDivergenceThreshold = 1e6;

bool config_bad(const LinkConfig& config, double delta_f) {
  if (!std::isfinite(delta_f) || delta_f > kDivergenceThreshold) return true;
  for (const auto& u : config.links)
    if (!is_finite(u)) return true;
  return false;
}

}  // namespace

LinkConfig euler_step(const ChainParams& params, const LinkConfig& config, double dt,
                      const Eigen::MatrixXd& noise) {
  const int n = params.n;
  const int N = params.N;
  const int dim = n * n - 1;
  const GeneratorBasis& basis = generator_basis(n);
  const DriftTable table = drift(params, config);
  const double root = std::sqrt(2.0 * dt);

  LinkConfig next = config;
  // exceptions must not escape an OpenMP region; capture and rethrow
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < N; ++k) {
    try {
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      for (int a = 0; a < dim; ++a) {
        const Complex c = table(a, k) * dt + noise(a, k) * root;
        h -= Complex(0, 1) * c * basis.generators[a];
      }
      next.links[k] = expm(h) * config.links[k];
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return next;
}

ChainReport run_chain(const ChainParams& params, const Schedule& schedule,
                      const CoolingStrategy& strategy, const std::vector<int>& observable_ks) {
  const int n = params.n;
  const int N = params.N;
  const int dim = n * n - 1;

  ChainReport report;
  report.params = params;
  report.schedule = schedule;
  report.strategy = strategy;
  for (int k : observable_ks) report.estimates[k];

  const std::uint64_t burn_steps =
      static_cast<std::uint64_t>(std::llround(schedule.burn_in_time / schedule.dt));
  const std::uint64_t interval = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(schedule.sample_interval / schedule.dt)));
  const std::uint64_t total_steps = burn_steps + schedule.num_samples * interval;

  LinkConfig config = LinkConfig::identity(n, N);
  Eigen::MatrixXd noise(dim, N);
  const bool no_cooling = std::holds_alternative<NoCooling>(strategy);

  for (std::uint64_t step = 0; step < total_steps; ++step) {
    report.steps_taken = step + 1;
    const double t = static_cast<double>(step + 1) * schedule.dt;

    std::optional<Spectrum> loop_spectrum;
    try {
      for (int k = 0; k < N; ++k)
        for (int a = 0; a < dim; ++a)
          noise(a, k) = normal_variate(schedule.seed,
                                       static_cast<std::uint64_t>(k) * dim + a, step);
      config = euler_step(params, config, schedule.dt, noise);

      if (!no_cooling) {
        CoolingOutcome outcome = apply_cooling(config, strategy, schedule.dt);
        config = std::move(outcome.cooled);
        loop_spectrum = std::move(outcome.spectrum);
      }
      repair_determinants(config);
    } catch (const std::exception&) {
      // a non-finite intermediate ended the trajectory; report it as divergence
      report.diverged = true;
      report.delta_f_series.emplace_back(t, std::numeric_limits<double>::infinity());
      break;
    }

    const double delta_f = unitarity_distance(config);
    if (config_bad(config, delta_f)) {
      report.diverged = true;
      report.delta_f_series.emplace_back(t, delta_f);
      break;
    }
    if ((step + 1) % static_cast<std::uint64_t>(schedule.log_stride) == 0)
      report.delta_f_series.emplace_back(t, delta_f);

    if (step + 1 > burn_steps && (step + 1 - burn_steps) % interval == 0) {
      for (int k : observable_ks) report.estimates[k].add(loop_observable(config, k));
      if (schedule.record_samples) {
        if (!loop_spectrum) {
          ComplexMatrix p = ComplexMatrix::Identity(n, n);
          for (const auto& u : config.links) p = (p * u).eval();
          loop_spectrum = eig(p);
        }
        std::vector<double> phases(n);
        for (int j = 0; j < n; ++j) phases[j] = std::arg(loop_spectrum->values[j]);
        report.samples.push_back(std::move(phases));
      }
    }
  }
  return report;
}

}  // namespace polychain
