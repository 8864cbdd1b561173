// Command-line front end for the Polyakov-chain Langevin library.
//
// Subcommands: chain, reduced, exact, region, flow, cool-bench. Config files
// are JSON with the same keys as the long flags (dashes become underscores);
// flags given explicitly override file values. Every file write is whole-file
// atomic (temp + rename). JSON reports embed the full config including the
// seed, so any report can be re-checked later with --verify.
//
// Exit codes: 0 success, 1 diverged/escaped (or failed verification),
// 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polychain/exact_oracle.hpp"
#include "polychain/langevin.hpp"
#include "polychain/reduced_su2.hpp"

using nlohmann::json;
using namespace polychain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiverged = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small utilities

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Relative output paths land under POLYCHAIN_OUT_DIR when that is set.
std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("POLYCHAIN_OUT_DIR"); dir && *dir)
      p = std::filesystem::path(dir) / p;
  }
  return p;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target = resolve_out(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp =
      target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

// Reject config keys that do not correspond to any flag of the subcommand.
void check_known_keys(const json& j, const std::vector<std::string>& known,
                      const std::string& command) {
  if (!j.is_object()) throw ConfigError("config for `" + command + "` must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown field \"" + key + "\" in config for `" + command + "`");
  }
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
  return cmd->get_option(name)->count() > 0;
}

std::string complex_to_text(Complex z) {
  char buf[64];
  if (std::abs(z.imag()) < 5e-5)
    std::snprintf(buf, sizeof(buf), "%.4f", z.real());
  else
    std::snprintf(buf, sizeof(buf), "%.4f%+.4fi", z.real(), z.imag());
  return buf;
}

json stats_to_json(const ComplexStats& stats) {
  return {{"mean_re", stats.mean().real()},
          {"mean_im", stats.mean().imag()},
          {"se_re", stats.std_error().real()},
          {"se_im", stats.std_error().imag()},
          {"count", stats.count()}};
}

json observables_to_json(const std::map<int, ComplexStats>& estimates) {
  json obs = json::object();
  for (const auto& [k, stats] : estimates) obs[std::to_string(k)] = stats_to_json(stats);
  return obs;
}

void print_observables(const std::map<int, ComplexStats>& estimates) {
  for (const auto& [k, stats] : estimates) {
    if (stats.count() == 0) continue;
    std::printf("O_%d = %s  (se %.2g, %llu samples)\n", k,
                complex_to_text(stats.mean()).c_str(), std::abs(stats.std_error()),
                static_cast<unsigned long long>(stats.count()));
  }
}

std::string series_csv(const std::vector<std::pair<double, double>>& series) {
  std::string out = "t,delta_f\n";
  for (const auto& [t, df] : series)
    out += format_double(t) + "," + format_double(df) + "\n";
  return out;
}

void write_report(const std::string& path, const std::string& command, const json& config,
                  const json& results) {
  const json report = {{"command", command}, {"config", config}, {"results", results}};
  atomic_write(path, report.dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// chain

namespace {

struct ChainCli {
  int n = 3;
  int N = 16;
  double beta = 2.0;
  double beta_im = 0.0;
  double kappa = 0.1;
  double mu = 1.0;
  std::string cooling = "optimal";
  double alpha = 1.0;
  int iters = 5;
  double dt = 2e-5;
  double burn_in = 0.0;
  double sample_interval = 0.0;
  std::uint64_t num_samples = 0;
  std::uint64_t seed = 12345;
  int log_stride = 100;
  std::string out, series;
};

const std::vector<std::string> kChainKeys = {
    "n",       "N",     "beta",  "beta_im", "kappa",           "mu",
    "cooling", "alpha", "iters", "dt",      "burn_in",         "sample_interval",
    "num_samples", "seed", "log_stride",    "out",             "series"};

void chain_from_json(const json& j, ChainCli& c) {
  check_known_keys(j, kChainKeys, "chain");
  if (j.contains("n")) c.n = j["n"].get<int>();
  if (j.contains("N")) c.N = j["N"].get<int>();
  if (j.contains("beta")) c.beta = j["beta"].get<double>();
  if (j.contains("beta_im")) c.beta_im = j["beta_im"].get<double>();
  if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("mu")) c.mu = j["mu"].get<double>();
  if (j.contains("cooling")) c.cooling = j["cooling"].get<std::string>();
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("iters")) c.iters = j["iters"].get<int>();
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("burn_in")) c.burn_in = j["burn_in"].get<double>();
  if (j.contains("sample_interval")) c.sample_interval = j["sample_interval"].get<double>();
  if (j.contains("num_samples")) c.num_samples = j["num_samples"].get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("log_stride")) c.log_stride = j["log_stride"].get<int>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("series")) c.series = j["series"].get<std::string>();
}

// Config-file values fill in whatever the command line left untouched.
void chain_merge_config(const CLI::App* cmd, const json& j, ChainCli& live) {
  ChainCli file_vals;
  chain_from_json(j, file_vals);
  if (!flag_given(cmd, "--n")) live.n = file_vals.n;
  if (!flag_given(cmd, "--N")) live.N = file_vals.N;
  if (!flag_given(cmd, "--beta")) live.beta = file_vals.beta;
  if (!flag_given(cmd, "--beta-im")) live.beta_im = file_vals.beta_im;
  if (!flag_given(cmd, "--kappa")) live.kappa = file_vals.kappa;
  if (!flag_given(cmd, "--mu")) live.mu = file_vals.mu;
  if (!flag_given(cmd, "--cooling")) live.cooling = file_vals.cooling;
  if (!flag_given(cmd, "--alpha")) live.alpha = file_vals.alpha;
  if (!flag_given(cmd, "--iters")) live.iters = file_vals.iters;
  if (!flag_given(cmd, "--dt")) live.dt = file_vals.dt;
  if (!flag_given(cmd, "--burn-in")) live.burn_in = file_vals.burn_in;
  if (!flag_given(cmd, "--sample-interval")) live.sample_interval = file_vals.sample_interval;
  if (!flag_given(cmd, "--num-samples")) live.num_samples = file_vals.num_samples;
  if (!flag_given(cmd, "--seed")) live.seed = file_vals.seed;
  if (!flag_given(cmd, "--log-stride")) live.log_stride = file_vals.log_stride;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
  if (!flag_given(cmd, "--series")) live.series = file_vals.series;
}

json chain_to_json(const ChainCli& c) {
  return {{"n", c.n},
          {"N", c.N},
          {"beta", c.beta},
          {"beta_im", c.beta_im},
          {"kappa", c.kappa},
          {"mu", c.mu},
          {"cooling", c.cooling},
          {"alpha", c.alpha},
          {"iters", c.iters},
          {"dt", c.dt},
          {"burn_in", c.burn_in},
          {"sample_interval", c.sample_interval},
          {"num_samples", c.num_samples},
          {"seed", c.seed},
          {"log_stride", c.log_stride}};
}

CoolingStrategy parse_cooling(const std::string& name, double alpha, int iters) {
  if (name == "none") return NoCooling{};
  if (name == "gradient") return GradientDescent{alpha, iters};
  if (name == "optimal") return Optimal{};
  throw ConfigError("cooling must be one of none|gradient|optimal, got \"" + name + "\"");
}

void validate_chain(const ChainCli& c) {
  if (c.n < 2) throw ConfigError("n must be >= 2");
  if (c.N < 1) throw ConfigError("N must be >= 1");
  if (!(c.dt > 0)) throw ConfigError("dt must be positive");
  if (c.burn_in < 0) throw ConfigError("burn_in must be nonnegative");
  if (c.num_samples > 0 && !(c.sample_interval > 0))
    throw ConfigError("sample_interval must be positive when num_samples > 0");
  if (c.iters < 1) throw ConfigError("iters must be >= 1");
  if (c.log_stride < 1) throw ConfigError("log_stride must be >= 1");
}

json run_chain_command(const ChainCli& c, int& exit_code) {
  validate_chain(c);
  const ChainParams params =
      ChainParams::hopping(c.n, c.N, Complex(c.beta, c.beta_im), c.kappa, c.mu);
  const CoolingStrategy strategy = parse_cooling(c.cooling, c.alpha, c.iters);
  Schedule schedule;
  schedule.dt = c.dt;
  schedule.burn_in_time = c.burn_in;
  schedule.sample_interval = c.sample_interval;
  schedule.num_samples = c.num_samples;
  schedule.seed = c.seed;
  schedule.log_stride = c.log_stride;

  const ChainReport report = run_chain(params, schedule, strategy, {1, -1, 2, -2, 3, -3});

  double delta_f_max = 0;
  for (const auto& [t, df] : report.delta_f_series)
    delta_f_max = std::max(delta_f_max, df);

  print_observables(report.estimates);
  std::printf("delta_f max %.3g over %llu steps%s  (seed %llu)\n", delta_f_max,
              static_cast<unsigned long long>(report.steps_taken),
              report.diverged ? "  [DIVERGED]" : "",
              static_cast<unsigned long long>(c.seed));

  if (!c.series.empty()) atomic_write(c.series, series_csv(report.delta_f_series));
  exit_code = report.diverged ? kExitDiverged : kExitOk;
  return {{"diverged", report.diverged},
          {"steps_taken", report.steps_taken},
          {"delta_f_max", delta_f_max},
          {"observables", observables_to_json(report.estimates)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// reduced

namespace {

struct ReducedCli {
  double a = 1.0;
  double b = 0.2;
  double dt = 1e-5;
  double burn_in = 3.0;
  double sample_interval = 0.1;
  std::uint64_t num_samples = 10000;
  std::uint64_t seed = 12345;
  double x0 = 0.5;
  double y0 = 0.0;
  double y_bound = 30.0;
  double cap_factor = 10.0;
  std::string out, samples;
};

const std::vector<std::string> kReducedKeys = {
    "a",  "b",  "dt",      "burn_in",    "sample_interval", "num_samples", "seed",
    "x0", "y0", "y_bound", "cap_factor", "out",             "samples"};

void reduced_from_json(const json& j, ReducedCli& c) {
  check_known_keys(j, kReducedKeys, "reduced");
  if (j.contains("a")) c.a = j["a"].get<double>();
  if (j.contains("b")) c.b = j["b"].get<double>();
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("burn_in")) c.burn_in = j["burn_in"].get<double>();
  if (j.contains("sample_interval")) c.sample_interval = j["sample_interval"].get<double>();
  if (j.contains("num_samples")) c.num_samples = j["num_samples"].get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("x0")) c.x0 = j["x0"].get<double>();
  if (j.contains("y0")) c.y0 = j["y0"].get<double>();
  if (j.contains("y_bound")) c.y_bound = j["y_bound"].get<double>();
  if (j.contains("cap_factor")) c.cap_factor = j["cap_factor"].get<double>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("samples")) c.samples = j["samples"].get<std::string>();
}

void reduced_merge_config(const CLI::App* cmd, const json& j, ReducedCli& live) {
  ReducedCli file_vals;
  reduced_from_json(j, file_vals);
  if (!flag_given(cmd, "--a")) live.a = file_vals.a;
  if (!flag_given(cmd, "--b")) live.b = file_vals.b;
  if (!flag_given(cmd, "--dt")) live.dt = file_vals.dt;
  if (!flag_given(cmd, "--burn-in")) live.burn_in = file_vals.burn_in;
  if (!flag_given(cmd, "--sample-interval")) live.sample_interval = file_vals.sample_interval;
  if (!flag_given(cmd, "--num-samples")) live.num_samples = file_vals.num_samples;
  if (!flag_given(cmd, "--seed")) live.seed = file_vals.seed;
  if (!flag_given(cmd, "--x0")) live.x0 = file_vals.x0;
  if (!flag_given(cmd, "--y0")) live.y0 = file_vals.y0;
  if (!flag_given(cmd, "--y-bound")) live.y_bound = file_vals.y_bound;
  if (!flag_given(cmd, "--cap-factor")) live.cap_factor = file_vals.cap_factor;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
  if (!flag_given(cmd, "--samples")) live.samples = file_vals.samples;
}

json reduced_to_json(const ReducedCli& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"dt", c.dt},
          {"burn_in", c.burn_in},
          {"sample_interval", c.sample_interval},
          {"num_samples", c.num_samples},
          {"seed", c.seed},
          {"x0", c.x0},
          {"y0", c.y0},
          {"y_bound", c.y_bound},
          {"cap_factor", c.cap_factor}};
}

void validate_reduced(const ReducedCli& c) {
  if (!(c.dt > 0)) throw ConfigError("dt must be positive");
  if (c.burn_in < 0) throw ConfigError("burn_in must be nonnegative");
  if (c.num_samples > 0 && !(c.sample_interval > 0))
    throw ConfigError("sample_interval must be positive when num_samples > 0");
  if (!(c.y_bound > 0)) throw ConfigError("y_bound must be positive");
  if (!(c.cap_factor > 0)) throw ConfigError("cap_factor must be positive");
}

json run_reduced_command(const ReducedCli& c, int& exit_code) {
  validate_reduced(c);
  Schedule schedule;
  schedule.dt = c.dt;
  schedule.burn_in_time = c.burn_in;
  schedule.sample_interval = c.sample_interval;
  schedule.num_samples = c.num_samples;
  schedule.seed = c.seed;
  schedule.record_samples = !c.samples.empty();
  ReducedOptions options;
  options.x0 = c.x0;
  options.y0 = c.y0;
  options.y_bound = c.y_bound;
  options.cap_factor = c.cap_factor;

  const ChainReport report = run_reduced({c.a, c.b}, schedule, options);

  print_observables(report.estimates);
  std::printf("max |y| %.3g over %llu steps%s  (seed %llu)\n", report.y_max,
              static_cast<unsigned long long>(report.steps_taken),
              report.escaped ? "  [ESCAPED]" : "",
              static_cast<unsigned long long>(c.seed));

  if (!c.samples.empty()) {
    std::string csv = "x,y\n";
    for (const auto& xy : report.samples)
      csv += format_double(xy[0]) + "," + format_double(xy[1]) + "\n";
    atomic_write(c.samples, csv);
  }
  exit_code = report.escaped ? kExitDiverged : kExitOk;
  return {{"escaped", report.escaped},
          {"steps_taken", report.steps_taken},
          {"drift_cap_hits", report.drift_cap_hits},
          {"y_max", report.y_max},
          {"observables", observables_to_json(report.estimates)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// exact

namespace {

struct ExactCli {
  std::string group = "su3";
  int k = 1;
  double beta = 2.0;
  double beta_im = 0.0;
  double kappa = 0.1;
  double mu = 1.0;
  double a = 1.0;
  double b = 0.2;
  int points = 512;
  std::string out;
};

const std::vector<std::string> kExactKeys = {"group", "k", "beta", "beta_im", "kappa",
                                             "mu",    "a", "b",    "points",  "out"};

void exact_from_json(const json& j, ExactCli& c) {
  check_known_keys(j, kExactKeys, "exact");
  if (j.contains("group")) c.group = j["group"].get<std::string>();
  if (j.contains("k")) c.k = j["k"].get<int>();
  if (j.contains("beta")) c.beta = j["beta"].get<double>();
  if (j.contains("beta_im")) c.beta_im = j["beta_im"].get<double>();
  if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("mu")) c.mu = j["mu"].get<double>();
  if (j.contains("a")) c.a = j["a"].get<double>();
  if (j.contains("b")) c.b = j["b"].get<double>();
  if (j.contains("points")) c.points = j["points"].get<int>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
}

void exact_merge_config(const CLI::App* cmd, const json& j, ExactCli& live) {
  ExactCli file_vals;
  exact_from_json(j, file_vals);
  if (!flag_given(cmd, "--group")) live.group = file_vals.group;
  if (!flag_given(cmd, "--k")) live.k = file_vals.k;
  if (!flag_given(cmd, "--beta")) live.beta = file_vals.beta;
  if (!flag_given(cmd, "--beta-im")) live.beta_im = file_vals.beta_im;
  if (!flag_given(cmd, "--kappa")) live.kappa = file_vals.kappa;
  if (!flag_given(cmd, "--mu")) live.mu = file_vals.mu;
  if (!flag_given(cmd, "--a")) live.a = file_vals.a;
  if (!flag_given(cmd, "--b")) live.b = file_vals.b;
  if (!flag_given(cmd, "--points")) live.points = file_vals.points;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
}

json exact_to_json(const ExactCli& c) {
  return {{"group", c.group},     {"k", c.k},         {"beta", c.beta},
          {"beta_im", c.beta_im}, {"kappa", c.kappa}, {"mu", c.mu},
          {"a", c.a},             {"b", c.b},         {"points", c.points}};
}

json run_exact_command(const ExactCli& c, int& exit_code) {
  Complex value;
  if (c.group == "su3") {
    const ChainParams p =
        ChainParams::hopping(3, 1, Complex(c.beta, c.beta_im), c.kappa, c.mu);
    value = su3_expectation(c.k, p.beta1, p.beta2, {c.points});
  } else if (c.group == "su2") {
    value = su2_expectation(c.k, Complex(c.a, c.b), {c.points});
  } else {
    throw ConfigError("group must be su2 or su3, got \"" + c.group + "\"");
  }
  std::printf("%s\n", complex_to_text(value).c_str());
  exit_code = kExitOk;
  return {{"value_re", value.real()}, {"value_im", value.imag()}};
}

}  // namespace

// ---------------------------------------------------------------------------
// region

namespace {

struct RegionCli {
  double a = 0.0;
  double b = 0.0;
  bool trace = false;
  double a_min = 0.0;
  double a_max = 2.598;
  int steps = 100;
  double tol = 1e-4;
  std::string out;
};

const std::vector<std::string> kRegionKeys = {"a",     "b",     "trace", "a_min",
                                              "a_max", "steps", "tol",   "out"};

void region_from_json(const json& j, RegionCli& c) {
  check_known_keys(j, kRegionKeys, "region");
  if (j.contains("a")) c.a = j["a"].get<double>();
  if (j.contains("b")) c.b = j["b"].get<double>();
  if (j.contains("trace")) c.trace = j["trace"].get<bool>();
  if (j.contains("a_min")) c.a_min = j["a_min"].get<double>();
  if (j.contains("a_max")) c.a_max = j["a_max"].get<double>();
  if (j.contains("steps")) c.steps = j["steps"].get<int>();
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
}

void region_merge_config(const CLI::App* cmd, const json& j, RegionCli& live) {
  RegionCli file_vals;
  region_from_json(j, file_vals);
  if (!flag_given(cmd, "--a")) live.a = file_vals.a;
  if (!flag_given(cmd, "--b")) live.b = file_vals.b;
  if (!flag_given(cmd, "--trace")) live.trace = file_vals.trace;
  if (!flag_given(cmd, "--a-min")) live.a_min = file_vals.a_min;
  if (!flag_given(cmd, "--a-max")) live.a_max = file_vals.a_max;
  if (!flag_given(cmd, "--steps")) live.steps = file_vals.steps;
  if (!flag_given(cmd, "--tol")) live.tol = file_vals.tol;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
}

json region_to_json(const RegionCli& c) { return {{"a", c.a}, {"b", c.b}}; }

json run_region_command(const RegionCli& c, int& exit_code) {
  exit_code = kExitOk;
  if (c.trace) {
    if (c.steps < 2) throw ConfigError("steps must be >= 2");
    if (!(c.a_max > c.a_min)) throw ConfigError("a_max must exceed a_min");
    std::string csv = "a,b\n";
    for (int i = 0; i < c.steps; ++i) {
      const double a = c.a_min + (c.a_max - c.a_min) * i / (c.steps - 1);
      csv += format_double(a) + "," + format_double(region_boundary_b(a, c.tol)) + "\n";
    }
    if (c.out.empty())
      std::fputs(csv.c_str(), stdout);
    else
      atomic_write(c.out, csv);
    return json();  // trace mode emits CSV, not a JSON report
  }
  const double f = localization_f(c.a, c.b);
  std::printf("localized: %s\n", f < 0 ? "true" : "false");
  std::printf("f = %.6g\n", f);
  return {{"f", f}, {"localized", f < 0}};
}

}  // namespace

// ---------------------------------------------------------------------------
// flow

namespace {

struct FlowCli {
  double a = 1.0;
  double b = 0.2;
  int nx = 61;
  int ny = 31;
  double x_min = -3.14;
  double x_max = 3.14;
  double y_min = -1.5;
  double y_max = 1.5;
  std::string out;
};

const std::vector<std::string> kFlowKeys = {"a",     "b",     "nx",    "ny",   "x_min",
                                            "x_max", "y_min", "y_max", "out"};

void flow_from_json(const json& j, FlowCli& c) {
  check_known_keys(j, kFlowKeys, "flow");
  if (j.contains("a")) c.a = j["a"].get<double>();
  if (j.contains("b")) c.b = j["b"].get<double>();
  if (j.contains("nx")) c.nx = j["nx"].get<int>();
  if (j.contains("ny")) c.ny = j["ny"].get<int>();
  if (j.contains("x_min")) c.x_min = j["x_min"].get<double>();
  if (j.contains("x_max")) c.x_max = j["x_max"].get<double>();
  if (j.contains("y_min")) c.y_min = j["y_min"].get<double>();
  if (j.contains("y_max")) c.y_max = j["y_max"].get<double>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
}

void flow_merge_config(const CLI::App* cmd, const json& j, FlowCli& live) {
  FlowCli file_vals;
  flow_from_json(j, file_vals);
  if (!flag_given(cmd, "--a")) live.a = file_vals.a;
  if (!flag_given(cmd, "--b")) live.b = file_vals.b;
  if (!flag_given(cmd, "--nx")) live.nx = file_vals.nx;
  if (!flag_given(cmd, "--ny")) live.ny = file_vals.ny;
  if (!flag_given(cmd, "--x-min")) live.x_min = file_vals.x_min;
  if (!flag_given(cmd, "--x-max")) live.x_max = file_vals.x_max;
  if (!flag_given(cmd, "--y-min")) live.y_min = file_vals.y_min;
  if (!flag_given(cmd, "--y-max")) live.y_max = file_vals.y_max;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
}

int run_flow_command(const FlowCli& c) {
  if (c.nx < 1 || c.ny < 1) throw ConfigError("nx and ny must be >= 1");
  const auto cells = flow_field(c.a, c.b, c.nx, c.ny, c.x_min, c.x_max, c.y_min, c.y_max);
  std::string csv = "x,y,kr,ki,norm\n";
  for (const auto& cell : cells) {
    csv += format_double(cell.x) + "," + format_double(cell.y) + "," +
           format_double(cell.kr) + "," + format_double(cell.ki) + "," +
           format_double(cell.norm) + "\n";
  }
  if (c.out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    atomic_write(c.out, csv);
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// cool-bench

namespace {

struct BenchCli {
  int n = 3;
  int N = 16;
  double beta = 2.0;
  double beta_im = 0.0;
  double kappa = 0.1;
  double mu = 1.0;
  double dt = 2e-5;
  std::uint64_t steps = 50000;
  std::uint64_t seed = 12345;
  double alpha = 1.0;
  int iters = 5;
  int log_stride = 100;
  std::string out = "cool_bench";
};

const std::vector<std::string> kBenchKeys = {"n",    "N",     "beta",  "beta_im",
                                             "kappa", "mu",   "dt",    "steps",
                                             "seed", "alpha", "iters", "log_stride",
                                             "out"};

void bench_from_json(const json& j, BenchCli& c) {
  check_known_keys(j, kBenchKeys, "cool-bench");
  if (j.contains("n")) c.n = j["n"].get<int>();
  if (j.contains("N")) c.N = j["N"].get<int>();
  if (j.contains("beta")) c.beta = j["beta"].get<double>();
  if (j.contains("beta_im")) c.beta_im = j["beta_im"].get<double>();
  if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("mu")) c.mu = j["mu"].get<double>();
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("steps")) c.steps = j["steps"].get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("iters")) c.iters = j["iters"].get<int>();
  if (j.contains("log_stride")) c.log_stride = j["log_stride"].get<int>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
}

void bench_merge_config(const CLI::App* cmd, const json& j, BenchCli& live) {
  BenchCli file_vals;
  bench_from_json(j, file_vals);
  if (!flag_given(cmd, "--n")) live.n = file_vals.n;
  if (!flag_given(cmd, "--N")) live.N = file_vals.N;
  if (!flag_given(cmd, "--beta")) live.beta = file_vals.beta;
  if (!flag_given(cmd, "--beta-im")) live.beta_im = file_vals.beta_im;
  if (!flag_given(cmd, "--kappa")) live.kappa = file_vals.kappa;
  if (!flag_given(cmd, "--mu")) live.mu = file_vals.mu;
  if (!flag_given(cmd, "--dt")) live.dt = file_vals.dt;
  if (!flag_given(cmd, "--steps")) live.steps = file_vals.steps;
  if (!flag_given(cmd, "--seed")) live.seed = file_vals.seed;
  if (!flag_given(cmd, "--alpha")) live.alpha = file_vals.alpha;
  if (!flag_given(cmd, "--iters")) live.iters = file_vals.iters;
  if (!flag_given(cmd, "--log-stride")) live.log_stride = file_vals.log_stride;
  if (!flag_given(cmd, "--out")) live.out = file_vals.out;
}

int run_bench_command(const BenchCli& c) {
  if (c.n < 2 || c.N < 1) throw ConfigError("need n >= 2 and N >= 1");
  if (!(c.dt > 0)) throw ConfigError("dt must be positive");
  if (c.out.empty()) throw ConfigError("out prefix must not be empty");
  const ChainParams params =
      ChainParams::hopping(c.n, c.N, Complex(c.beta, c.beta_im), c.kappa, c.mu);
  Schedule schedule;
  schedule.dt = c.dt;
  schedule.burn_in_time = 0;
  schedule.sample_interval = c.dt;
  schedule.num_samples = c.steps;
  schedule.seed = c.seed;
  schedule.log_stride = c.log_stride;

  const std::vector<std::pair<std::string, CoolingStrategy>> arms = {
      {"none", NoCooling{}},
      {"gradient", GradientDescent{c.alpha, c.iters}},
      {"optimal", Optimal{}},
  };
  // identical seed => identical noise stream for every arm (counter-based RNG)
  for (const auto& [name, strategy] : arms) {
    const ChainReport report = run_chain(params, schedule, strategy, {});
    const std::string path = c.out + "_" + name + ".csv";
    atomic_write(path, series_csv(report.delta_f_series));
    std::printf("%-8s steps %7llu%s  -> %s\n", name.c_str(),
                static_cast<unsigned long long>(report.steps_taken),
                report.diverged ? "  [DIVERGED]" : "", path.c_str());
  }
  // comparative tool: early divergence of an arm is a result, not a failure
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// verify

namespace {

int run_verify(const std::string& path) {
  const json report = load_json_file(path);
  if (!report.contains("command") || !report.contains("config") ||
      !report.contains("results"))
    throw ConfigError("not a report file (missing command/config/results): " + path);
  const std::string command = report["command"].get<std::string>();
  int exit_code = kExitOk;
  json fresh;
  if (command == "chain") {
    ChainCli c;
    chain_from_json(report["config"], c);
    c.out.clear();
    c.series.clear();
    fresh = run_chain_command(c, exit_code);
  } else if (command == "reduced") {
    ReducedCli c;
    reduced_from_json(report["config"], c);
    c.out.clear();
    c.samples.clear();
    fresh = run_reduced_command(c, exit_code);
  } else if (command == "exact") {
    ExactCli c;
    exact_from_json(report["config"], c);
    c.out.clear();
    fresh = run_exact_command(c, exit_code);
  } else if (command == "region") {
    RegionCli c;
    region_from_json(report["config"], c);
    c.out.clear();
    fresh = run_region_command(c, exit_code);
  } else {
    throw ConfigError("cannot verify reports of command \"" + command + "\"");
  }
  if (fresh == report["results"]) {
    std::printf("verified: %s\n", path.c_str());
    return kExitOk;
  }
  std::fprintf(stderr, "verification FAILED for %s\nexpected: %s\ngot:      %s\n",
               path.c_str(), report["results"].dump().c_str(), fresh.dump().c_str());
  return kExitDiverged;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"Complex Langevin simulations of the periodic SU(n) link chain"};
  app.require_subcommand(0, 1);

  std::string verify_path;
  app.add_option("--verify", verify_path,
                 "re-run the config embedded in a JSON report and compare results");

  ChainCli chain_cli;
  std::string chain_config;
  auto* chain_cmd = app.add_subcommand("chain", "complex Langevin run of the link chain");
  chain_cmd->add_option("--config", chain_config, "JSON config file (flags override it)");
  chain_cmd->add_option("--n", chain_cli.n, "group dimension");
  chain_cmd->add_option("--N", chain_cli.N, "number of links");
  chain_cmd->add_option("--beta", chain_cli.beta, "coupling beta (real part)");
  chain_cmd->add_option("--beta-im", chain_cli.beta_im, "coupling beta (imaginary part)");
  chain_cmd->add_option("--kappa", chain_cli.kappa, "hopping weight kappa");
  chain_cmd->add_option("--mu", chain_cli.mu, "chemical potential mu");
  chain_cmd->add_option("--cooling", chain_cli.cooling, "none|gradient|optimal");
  chain_cmd->add_option("--alpha", chain_cli.alpha, "descent step factor");
  chain_cmd->add_option("--iters", chain_cli.iters, "descent iterations per step");
  chain_cmd->add_option("--dt", chain_cli.dt, "time step");
  chain_cmd->add_option("--burn-in", chain_cli.burn_in, "burn-in time");
  chain_cmd->add_option("--sample-interval", chain_cli.sample_interval,
                        "time between samples");
  chain_cmd->add_option("--num-samples", chain_cli.num_samples, "number of samples");
  chain_cmd->add_option("--seed", chain_cli.seed, "RNG seed");
  chain_cmd->add_option("--log-stride", chain_cli.log_stride,
                        "steps between recorded delta_f points");
  chain_cmd->add_option("--out", chain_cli.out, "JSON report path");
  chain_cmd->add_option("--series", chain_cli.series, "delta_f CSV path");

  ReducedCli reduced_cli;
  std::string reduced_config;
  auto* reduced_cmd =
      app.add_subcommand("reduced", "one-variable SU(2) eigenvalue dynamics");
  reduced_cmd->add_option("--config", reduced_config, "JSON config file (flags override it)");
  reduced_cmd->add_option("--a", reduced_cli.a, "coupling A (real part of beta)");
  reduced_cmd->add_option("--b", reduced_cli.b, "coupling B (imaginary part of beta)");
  reduced_cmd->add_option("--dt", reduced_cli.dt, "time step");
  reduced_cmd->add_option("--burn-in", reduced_cli.burn_in, "burn-in time");
  reduced_cmd->add_option("--sample-interval", reduced_cli.sample_interval,
                          "time between samples");
  reduced_cmd->add_option("--num-samples", reduced_cli.num_samples, "number of samples");
  reduced_cmd->add_option("--seed", reduced_cli.seed, "RNG seed");
  reduced_cmd->add_option("--x0", reduced_cli.x0, "initial x");
  reduced_cmd->add_option("--y0", reduced_cli.y0, "initial y");
  reduced_cmd->add_option("--y-bound", reduced_cli.y_bound, "escape bound on |y|");
  reduced_cmd->add_option("--cap-factor", reduced_cli.cap_factor,
                          "drift displacement cap in units of sqrt(2 dt)");
  reduced_cmd->add_option("--out", reduced_cli.out, "JSON report path");
  reduced_cmd->add_option("--samples", reduced_cli.samples, "sample cloud CSV path");

  ExactCli exact_cli;
  std::string exact_config;
  auto* exact_cmd = app.add_subcommand("exact", "deterministic group-integral values");
  exact_cmd->add_option("--config", exact_config, "JSON config file (flags override it)");
  exact_cmd->add_option("--group", exact_cli.group, "su2|su3");
  exact_cmd->add_option("--k", exact_cli.k, "winding number of the observable");
  exact_cmd->add_option("--beta", exact_cli.beta, "su3: coupling beta (real part)");
  exact_cmd->add_option("--beta-im", exact_cli.beta_im, "su3: coupling beta (imag part)");
  exact_cmd->add_option("--kappa", exact_cli.kappa, "su3: hopping weight kappa");
  exact_cmd->add_option("--mu", exact_cli.mu, "su3: chemical potential mu");
  exact_cmd->add_option("--a", exact_cli.a, "su2: coupling A");
  exact_cmd->add_option("--b", exact_cli.b, "su2: coupling B");
  exact_cmd->add_option("--points", exact_cli.points, "grid points per dimension");
  exact_cmd->add_option("--out", exact_cli.out, "JSON report path");

  RegionCli region_cli;
  std::string region_config;
  auto* region_cmd =
      app.add_subcommand("region", "localization-region queries and boundary tracing");
  region_cmd->add_option("--config", region_config, "JSON config file (flags override it)");
  region_cmd->add_option("--a", region_cli.a, "coupling A");
  region_cmd->add_option("--b", region_cli.b, "coupling B");
  region_cmd->add_flag("--trace", region_cli.trace, "emit the boundary curve as CSV");
  region_cmd->add_option("--a-min", region_cli.a_min, "trace: first A");
  region_cmd->add_option("--a-max", region_cli.a_max, "trace: last A");
  region_cmd->add_option("--steps", region_cli.steps, "trace: number of A values");
  region_cmd->add_option("--tol", region_cli.tol, "boundary bisection tolerance");
  region_cmd->add_option("--out", region_cli.out, "output path (JSON report or trace CSV)");

  FlowCli flow_cli;
  std::string flow_config;
  auto* flow_cmd = app.add_subcommand("flow", "drift field on an (x, y) grid");
  flow_cmd->add_option("--config", flow_config, "JSON config file (flags override it)");
  flow_cmd->add_option("--a", flow_cli.a, "coupling A");
  flow_cmd->add_option("--b", flow_cli.b, "coupling B");
  flow_cmd->add_option("--nx", flow_cli.nx, "grid points in x");
  flow_cmd->add_option("--ny", flow_cli.ny, "grid points in y");
  flow_cmd->add_option("--x-min", flow_cli.x_min, "grid lower x bound");
  flow_cmd->add_option("--x-max", flow_cli.x_max, "grid upper x bound");
  flow_cmd->add_option("--y-min", flow_cli.y_min, "grid lower y bound");
  flow_cmd->add_option("--y-max", flow_cli.y_max, "grid upper y bound");
  flow_cmd->add_option("--out", flow_cli.out, "CSV path (stdout when omitted)");

  BenchCli bench_cli;
  std::string bench_config;
  auto* bench_cmd = app.add_subcommand(
      "cool-bench", "one noise stream, three cooling strategies, three delta_f series");
  bench_cmd->add_option("--config", bench_config, "JSON config file (flags override it)");
  bench_cmd->add_option("--n", bench_cli.n, "group dimension");
  bench_cmd->add_option("--N", bench_cli.N, "number of links");
  bench_cmd->add_option("--beta", bench_cli.beta, "coupling beta (real part)");
  bench_cmd->add_option("--beta-im", bench_cli.beta_im, "coupling beta (imaginary part)");
  bench_cmd->add_option("--kappa", bench_cli.kappa, "hopping weight kappa");
  bench_cmd->add_option("--mu", bench_cli.mu, "chemical potential mu");
  bench_cmd->add_option("--dt", bench_cli.dt, "time step");
  bench_cmd->add_option("--steps", bench_cli.steps, "steps per strategy");
  bench_cmd->add_option("--seed", bench_cli.seed, "shared RNG seed");
  bench_cmd->add_option("--alpha", bench_cli.alpha, "descent step factor");
  bench_cmd->add_option("--iters", bench_cli.iters, "descent iterations per step");
  bench_cmd->add_option("--log-stride", bench_cli.log_stride,
                        "steps between recorded delta_f points");
  bench_cmd->add_option("--out", bench_cli.out, "CSV path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (!verify_path.empty()) {
      if (!app.get_subcommands().empty())
        throw ConfigError("--verify does not combine with a subcommand");
      return run_verify(verify_path);
    }

    int exit_code = kExitOk;
    if (chain_cmd->parsed()) {
      if (!chain_config.empty())
        chain_merge_config(chain_cmd, load_json_file(chain_config), chain_cli);
      const json results = run_chain_command(chain_cli, exit_code);
      if (!chain_cli.out.empty())
        write_report(chain_cli.out, "chain", chain_to_json(chain_cli), results);
      return exit_code;
    }
    if (reduced_cmd->parsed()) {
      if (!reduced_config.empty())
        reduced_merge_config(reduced_cmd, load_json_file(reduced_config), reduced_cli);
      const json results = run_reduced_command(reduced_cli, exit_code);
      if (!reduced_cli.out.empty())
        write_report(reduced_cli.out, "reduced", reduced_to_json(reduced_cli), results);
      return exit_code;
    }
    if (exact_cmd->parsed()) {
      if (!exact_config.empty())
        exact_merge_config(exact_cmd, load_json_file(exact_config), exact_cli);
      const json results = run_exact_command(exact_cli, exit_code);
      if (!exact_cli.out.empty())
        write_report(exact_cli.out, "exact", exact_to_json(exact_cli), results);
      return exit_code;
    }
    if (region_cmd->parsed()) {
      if (!region_config.empty())
        region_merge_config(region_cmd, load_json_file(region_config), region_cli);
      const json results = run_region_command(region_cli, exit_code);
      if (!region_cli.trace && !region_cli.out.empty())
        write_report(region_cli.out, "region", region_to_json(region_cli), results);
      return exit_code;
    }
    if (flow_cmd->parsed()) {
      if (!flow_config.empty())
        flow_merge_config(flow_cmd, load_json_file(flow_config), flow_cli);
      return run_flow_command(flow_cli);
    }
    if (bench_cmd->parsed()) {
      if (!bench_config.empty())
        bench_merge_config(bench_cmd, load_json_file(bench_config), bench_cli);
      return run_bench_command(bench_cli);
    }

    std::fputs(app.help().c_str(), stdout);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
