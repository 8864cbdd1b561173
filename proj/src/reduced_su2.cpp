#include "polychain/reduced_su2.hpp"

#include <cmath>
#include <stdexcept>

#include "polychain/rng.hpp"

namespace polychain {

namespace {

inline double wrap_to_pi(double x) {
  // map to (-pi, pi]
  double r = std::fmod(x + M_PI, 2.0 * M_PI);
  if (r <= 0) r += 2.0 * M_PI;
  return r - M_PI;
}

// Inner maximum of the cubic xi^3 c3 + xi^2 c2 + xi c1 + c0 over [-1, 1]:
// endpoints plus real roots of the derivative inside the interval.
double cubic_max(double c3, double c2, double c1, double c0) {
  auto g = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
  double best = std::max(g(-1.0), g(1.0));
  const double disc = 4.0 * c2 * c2 - 12.0 * c3 * c1;
  if (disc >= 0 && c3 != 0) {
    const double r = std::sqrt(disc);
    for (double x : {(-2.0 * c2 + r) / (6.0 * c3), (-2.0 * c2 - r) / (6.0 * c3)})
      if (x > -1.0 && x < 1.0) best = std::max(best, g(x));
  }
  return best;
}

double inner_max(double eta, double a, double b) {
  const double w = 1.0 - eta * eta;
  const double c3 = w;
  const double c2 = -(b / (a * eta)) * w;
  const double c1 = -1.0;
  const double c0 = b / (a * eta) - std::sqrt(w) / a;
  return cubic_max(c3, c2, c1, c0);
}

}  // namespace

std::pair<double, double> drift_reduced(double x, double y, double A, double B) {
  const double denom = std::cosh(2.0 * y) - std::cos(2.0 * x);
  if (denom == 0.0) throw std::domain_error("drift_reduced: singular point s = k pi");
  const double kr =
      2.0 * (-A * std::cosh(y) * std::sin(x) + B * std::sinh(y) * std::cos(x) +
             std::sin(2.0 * x) / denom);
  const double ki =
      -2.0 * (A * std::sinh(y) * std::cos(x) + B * std::cosh(y) * std::sin(x) +
              std::sinh(2.0 * y) / denom);
  return {kr, ki};
}

ChainReport run_reduced(const ReducedParams& params, const Schedule& schedule,
                        const ReducedOptions& options) {
  ChainReport report;
  report.schedule = schedule;
  report.strategy = NoCooling{};

  const std::uint64_t burn_steps =
      static_cast<std::uint64_t>(std::llround(schedule.burn_in_time / schedule.dt));
  const std::uint64_t interval = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(schedule.sample_interval / schedule.dt)));
  const std::uint64_t total_steps = burn_steps + schedule.num_samples * interval;

  const double dt = schedule.dt;
  const double root = std::sqrt(2.0 * dt);
  const double cap = options.cap_factor * root;
  const std::vector<int> ks = {1, 2, 3};
  for (int k : ks) report.estimates[k];

  double x = options.x0, y = options.y0;
  for (std::uint64_t step = 0; step < total_steps; ++step) {
    const double denom = std::cosh(2.0 * y) - std::cos(2.0 * x);
    double dx, dy;
    if (denom == 0.0) {
      // unreachable in practice (measure-zero point); treat as capped kick
      dx = dy = 0.0;
      ++report.drift_cap_hits;
    } else {
      const double kr =
          2.0 * (-params.A * std::cosh(y) * std::sin(x) +
                 params.B * std::sinh(y) * std::cos(x) + std::sin(2.0 * x) / denom);
      const double ki =
          -2.0 * (params.A * std::sinh(y) * std::cos(x) +
                  params.B * std::cosh(y) * std::sin(x) + std::sinh(2.0 * y) / denom);
      dx = kr * dt;
      dy = ki * dt;
      const double len = std::hypot(dx, dy);
      if (len > cap) {
        const double scale = cap / len;
        dx *= scale;
        dy *= scale;
        ++report.drift_cap_hits;
      }
    }
    x = wrap_to_pi(x + dx + normal_variate(schedule.seed, 0, step) * root);
    y += dy;
    report.steps_taken = step + 1;

    if (!std::isfinite(x) || !std::isfinite(y) || std::abs(y) > options.y_bound) {
      report.escaped = true;
      break;
    }
    if (step + 1 > burn_steps && (step + 1 - burn_steps) % interval == 0) {
      for (int k : ks) {
        const double kx = k * x, ky = k * y;
        report.estimates[k].add(
            Complex(2.0 * std::cos(kx) * std::cosh(ky), -2.0 * std::sin(kx) * std::sinh(ky)));
      }
      report.y_max = std::max(report.y_max, std::abs(y));
      if (schedule.record_samples) report.samples.push_back({x, y});
    }
  }
  return report;
}

double localization_f(double A, double B, int eta_samples) {
  // Localization status is even in both parameters.
  const double a = std::abs(A), b = std::abs(B);
  if (a == 0.0) return b - 0.5;
  if (eta_samples < 10) throw std::invalid_argument("localization_f: eta_samples too small");

  // Grid of midpoints, then golden-section refinement around the best cell.
  int best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  const double h = 1.0 / eta_samples;
  for (int i = 0; i < eta_samples; ++i) {
    const double v = inner_max((i + 0.5) * h, a, b);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double lo = std::max(0.0, (best_i - 0.5) * h);
  double hi = std::min(1.0, (best_i + 1.5) * h);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = inner_max(c, a, b), fd = inner_max(d, a, b);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = inner_max(c, a, b);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = inner_max(d, a, b);
    }
  }
  return std::min({best, fc, fd});
}

double region_boundary_b(double A, double tol_b) {
  const double a = std::abs(A);
  if (a >= 1.5 * std::sqrt(3.0)) return 0.0;
  if (a == 0.0) return 0.5;
  double lo = 0.0, hi = 0.55;
  while (localization_f(a, hi) < 0) hi *= 2.0;
  while (hi - lo > tol_b) {
    const double mid = 0.5 * (lo + hi);
    (localization_f(a, mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<FlowCell> flow_field(double A, double B, int nx, int ny, double x_min,
                                 double x_max, double y_min, double y_max) {
  std::vector<FlowCell> cells(static_cast<std::size_t>(nx) * ny);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      FlowCell& cell = cells[static_cast<std::size_t>(j) * nx + i];
      cell.x = nx > 1 ? x_min + (x_max - x_min) * i / (nx - 1) : x_min;
      cell.y = ny > 1 ? y_min + (y_max - y_min) * j / (ny - 1) : y_min;
      const double denom = std::cosh(2.0 * cell.y) - std::cos(2.0 * cell.x);
      if (std::abs(denom) < 1e-14) {
        cell.singular = true;
        continue;
      }
      const auto [kr, ki] = drift_reduced(cell.x, cell.y, A, B);
      cell.norm = std::hypot(kr, ki);
      if (cell.norm > 0) {
        cell.kr = kr / cell.norm;
        cell.ki = ki / cell.norm;
      }
    }
  }
  return cells;
}

}  // namespace polychain
