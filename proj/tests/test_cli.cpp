// End-to-end tests of the polychain executable: output formats, exit codes,
// config handling, and the --verify round trip. The binary location comes in
// through the CLI_PATH environment variable (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string cli_path() {
  const char* path = std::getenv("CLI_PATH");
  REQUIRE_MESSAGE(path != nullptr, "CLI_PATH must point at the polychain binary");
  return path;
}

CommandResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Fresh scratch directory per test run; callers get absolute paths inside it.
fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "polychain_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("exact prints table values with four decimals") {
  const auto su3 = run_cli("exact --group su3 --k 1 --beta 2 --kappa 0.1 --mu 1");
  CHECK(su3.exit_code == 0);
  CHECK(contains(su3.output, "2.0957"));

  const auto su3_neg = run_cli("exact --group su3 --k -2 --beta 2 --kappa 0.1 --mu 1");
  CHECK(su3_neg.exit_code == 0);
  CHECK(contains(su3_neg.output, "0.4092"));

  const auto su2 = run_cli("exact --group su2 --a 1 --b 0.2 --k 1");
  CHECK(su2.exit_code == 0);
  CHECK(contains(su2.output, "0.8759+0.1300i"));
}

TEST_CASE("region answers point queries and traces the boundary") {
  const auto inside = run_cli("region --a 0 --b 0.49");
  CHECK(inside.exit_code == 0);
  CHECK(contains(inside.output, "localized: true"));

  const auto outside = run_cli("region --a 0 --b 0.51");
  CHECK(outside.exit_code == 0);
  CHECK(contains(outside.output, "localized: false"));

  const auto trace = run_cli("region --trace --a-min 0 --a-max 1 --steps 3 --tol 1e-3");
  CHECK(trace.exit_code == 0);
  CHECK(contains(trace.output, "a,b\n0,0.5\n"));
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run_cli("chain --bogus-flag 1").exit_code == 2);
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("exact --group su9").exit_code == 2);
  CHECK(run_cli("chain --dt -1").exit_code == 2);
  CHECK(run_cli("chain --cooling tepid").exit_code == 2);

  const fs::path bad_key = scratch_dir() / "bad_key.json";
  std::ofstream(bad_key) << R"({"frobnicate": 3})";
  const auto unknown = run_cli("chain --config " + bad_key.string());
  CHECK(unknown.exit_code == 2);
  CHECK(contains(unknown.output, "frobnicate"));

  const fs::path bad_syntax = scratch_dir() / "bad_syntax.json";
  std::ofstream(bad_syntax) << "{ not json";
  CHECK(run_cli("chain --config " + bad_syntax.string()).exit_code == 2);

  CHECK(run_cli("chain --config " + (scratch_dir() / "nope.json").string()).exit_code == 2);
}

TEST_CASE("chain writes a report with embedded config and a delta_f series") {
  const fs::path report_path = scratch_dir() / "chain_report.json";
  const fs::path series_path = scratch_dir() / "chain_df.csv";
  const auto run = run_cli(
      "chain --n 3 --N 4 --dt 1e-4 --burn-in 0.005 --sample-interval 0.002 "
      "--num-samples 20 --cooling optimal --seed 7 --log-stride 10 --out " +
      report_path.string() + " --series " + series_path.string());
  CHECK(run.exit_code == 0);
  CHECK(contains(run.output, "O_1 = "));

  const json report = json::parse(slurp(report_path));
  CHECK(report["command"] == "chain");
  CHECK(report["config"]["seed"] == 7);
  CHECK(report["config"]["N"] == 4);
  CHECK(report["config"]["cooling"] == "optimal");
  CHECK(report["results"]["diverged"] == false);
  CHECK(report["results"]["observables"]["1"]["count"] == 20);
  CHECK(report["results"]["delta_f_max"].get<double>() < 1e-3);

  const std::string series = slurp(series_path);
  CHECK(series.rfind("t,delta_f\n", 0) == 0);
  CHECK(std::count(series.begin(), series.end(), '\n') > 5);
}

TEST_CASE("verify reproduces a report and flags tampering") {
  const fs::path report_path = scratch_dir() / "verify_me.json";
  REQUIRE(run_cli("chain --n 2 --N 3 --dt 1e-4 --burn-in 0.002 --sample-interval 0.001 "
                  "--num-samples 10 --cooling gradient --seed 21 --out " +
                  report_path.string())
              .exit_code == 0);

  const auto ok = run_cli("--verify " + report_path.string());
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.output, "verified"));

  json tampered = json::parse(slurp(report_path));
  tampered["results"]["delta_f_max"] = 123.0;
  const fs::path tampered_path = scratch_dir() / "tampered.json";
  std::ofstream(tampered_path) << tampered.dump(2);
  const auto bad = run_cli("--verify " + tampered_path.string());
  CHECK(bad.exit_code == 1);
  CHECK(contains(bad.output, "FAILED"));

  CHECK(run_cli("--verify " + (scratch_dir() / "absent.json").string()).exit_code == 2);
}

TEST_CASE("reduced emits a sample cloud and signals escapes via exit 1") {
  const fs::path report_path = scratch_dir() / "reduced_report.json";
  const fs::path samples_path = scratch_dir() / "reduced_xy.csv";
  const auto run = run_cli("reduced --a 1 --b 0.2 --dt 1e-4 --burn-in 0.1 "
                           "--sample-interval 0.01 --num-samples 30 --seed 4 --out " +
                           report_path.string() + " --samples " + samples_path.string());
  CHECK(run.exit_code == 0);

  const json report = json::parse(slurp(report_path));
  CHECK(report["command"] == "reduced");
  CHECK(report["config"]["seed"] == 4);
  CHECK(report["results"]["escaped"] == false);
  CHECK(report["results"]["observables"]["1"]["count"] == 30);

  const std::string samples = slurp(samples_path);
  CHECK(samples.rfind("x,y\n", 0) == 0);
  CHECK(std::count(samples.begin(), samples.end(), '\n') == 31);  // header + 30 rows

  CHECK(run_cli("--verify " + report_path.string()).exit_code == 0);

  // strongly imaginary coupling with a tight bound: the walker leaves the strip
  const auto escape = run_cli("reduced --a 0 --b 2 --dt 1e-3 --burn-in 0 "
                              "--sample-interval 0.01 --num-samples 50 --y-bound 0.5 --seed 3");
  CHECK(escape.exit_code == 1);
  CHECK(contains(escape.output, "ESCAPED"));
}

TEST_CASE("flow prints a five-column CSV grid") {
  const auto run = run_cli("flow --a 1 --b 0.2 --nx 4 --ny 3");
  CHECK(run.exit_code == 0);
  CHECK(run.output.rfind("x,y,kr,ki,norm\n", 0) == 0);
  CHECK(std::count(run.output.begin(), run.output.end(), '\n') == 13);  // header + 4*3
}

TEST_CASE("cool-bench drives three strategies off one noise stream") {
  const fs::path prefix = scratch_dir() / "bench";
  const auto run = run_cli("cool-bench --n 2 --N 3 --dt 1e-3 --steps 200 --seed 5 "
                           "--log-stride 20 --out " + prefix.string());
  CHECK(run.exit_code == 0);
  for (const char* arm : {"none", "gradient", "optimal"}) {
    const std::string series = slurp(prefix.string() + "_" + arm + ".csv");
    CHECK(series.rfind("t,delta_f\n", 0) == 0);
    CHECK(std::count(series.begin(), series.end(), '\n') == 11);  // header + 200/20 rows
  }
}

TEST_CASE("explicit flags override config-file values") {
  const fs::path cfg = scratch_dir() / "merge.json";
  std::ofstream(cfg) << R"({"n": 2, "N": 6, "dt": 1e-4, "burn_in": 0.0,
                            "sample_interval": 0.001, "num_samples": 5, "seed": 100})";
  const fs::path report_path = scratch_dir() / "merge_report.json";
  const auto run = run_cli("chain --config " + cfg.string() + " --seed 200 --out " +
                           report_path.string());
  CHECK(run.exit_code == 0);
  const json report = json::parse(slurp(report_path));
  CHECK(report["config"]["seed"] == 200);  // flag wins
  CHECK(report["config"]["N"] == 6);       // file fills the rest
  CHECK(report["config"]["n"] == 2);
  CHECK(report["results"]["observables"]["1"]["count"] == 5);
}

TEST_CASE("relative outputs land under POLYCHAIN_OUT_DIR") {
  const fs::path out_dir = scratch_dir() / "outputs";
  const auto run = run_cli("exact --group su2 --a 5 --b 1 --k 1 --out su2_report.json",
                           "POLYCHAIN_OUT_DIR=" + out_dir.string() + " ");
  CHECK(run.exit_code == 0);
  const json report = json::parse(slurp(out_dir / "su2_report.json"));
  const double re = report["results"]["value_re"].get<double>();
  CHECK(std::abs(re - 1.7189) < 5e-4);
}
