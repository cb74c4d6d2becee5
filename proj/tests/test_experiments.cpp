#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"

#include "chaoslab/errors.hpp"
#include "chaoslab/experiments.hpp"
#include "chaoslab/parallel.hpp"

using namespace chaoslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chaoslab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const char* exe = std::getenv("CHAOSLAB_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "CHAOSLAB_CLI is not set");
  const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"experiment": "mc-gamma", "sizes": [8, 32], "draws": 100, "seed": 3,
                                  "law": "reflected", "format": "json"})");
  CHECK(c.kind == ExperimentKind::mc_gamma);
  CHECK(c.sizes == std::vector<std::size_t>{8, 32});
  CHECK(c.seed == 3u);
  CHECK(c.law == TargetLaw::reflected);
  CHECK(c.format == OutputFormat::json);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"q": "two"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"q": -2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "nope"})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK(parse_kind("ustat-gap") == ExperimentKind::ustat_gap);
  CHECK(to_string(ExperimentKind::oracle_check) == "oracle-check");
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.sizes = {4};
  CHECK_THROWS_AS(validate(c), ConfigError);  // no seed
  c.seed = 1;
  CHECK_NOTHROW(validate(c));
  c.kind = ExperimentKind::mc_gamma;
  CHECK_THROWS_AS(validate(c), ConfigError);  // no draws
  c.draws = 10;
  CHECK_NOTHROW(validate(c));
  c.sizes = {};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.sizes = {0};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.sizes = {4};
  c.lambda = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("output path resolution") {
  ExperimentConfig c;
  c.kind = ExperimentKind::identities;
  ::unsetenv("CHAOSLAB_OUTPUT_DIR");
  CHECK(output_path(c) == "./identities.csv");
  ::setenv("CHAOSLAB_OUTPUT_DIR", "/tmp/x", 1);
  CHECK(output_path(c) == "/tmp/x/identities.csv");
  c.format = OutputFormat::json;
  CHECK(output_path(c) == "/tmp/x/identities.json");
  c.out = "r.csv";
  CHECK(output_path(c) == "/tmp/x/r.csv");
  c.out = "/abs/r.csv";
  CHECK(output_path(c) == "/abs/r.csv");
  ::unsetenv("CHAOSLAB_OUTPUT_DIR");
}

TEST_CASE("experiment runs are reproducible") {
  const auto dir = scratch("repro");
  ExperimentConfig c;
  c.kind = ExperimentKind::mc_gamma;
  c.sizes = {4, 8};
  c.draws = 500;
  c.seed = 11;
  std::ostringstream log;
  c.out = (dir / "a.csv").string();
  set_worker_lanes(1);
  run(c, log);
  c.out = (dir / "b.csv").string();
  c.lanes = 4;
  run(c, log);
  set_worker_lanes(1);
  const auto a = slurp(dir / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.rfind("q,N,", 0) == 0);
  CHECK(log.str().find("philox4x32-10 seed=11") != std::string::npos);
}

TEST_CASE("every experiment kind produces an artifact") {
  const auto dir = scratch("kinds");
  ::setenv("CHAOSLAB_OUTPUT_DIR", dir.c_str(), 1);
  std::ostringstream log;
  for (const char* text : {
           R"({"experiment": "identities", "q": 2, "sizes": [3], "trials": 2, "seed": 1})",
           R"({"experiment": "diagnostics-sequence", "sizes": [4, 8], "seed": 1})",
           R"({"experiment": "oracle-check", "sizes": [4], "seed": 1, "family": "random", "trials": 2})",
           R"({"experiment": "ustat-gap", "sizes": [20, 40], "draws": 50, "seed": 1})",
           R"({"experiment": "ustat-gamma", "sizes": [50], "grids": [3], "draws": 50, "seed": 1, "format": "json"})"}) {
    const auto path = run(parse_config(text), log);
    CHECK(fs::exists(path));
    CHECK(fs::file_size(path) > 0);
  }
  ::unsetenv("CHAOSLAB_OUTPUT_DIR");
}

TEST_CASE("command line exit codes and reruns") {
  const auto dir = scratch("cli");
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  CHECK(cli("diagnostics-sequence --seed 5 --sizes 4,8 --out " + a) == kExitOk);
  CHECK(cli("diagnostics-sequence --seed 5 --sizes 4,8 --out " + b) == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(cli("diagnostics-sequence --sizes 4") == kExitConfig);              // missing seed
  CHECK(cli("no-such-command") == kExitConfig);
  CHECK(cli("mc-gamma --seed 1 --sizes 4 --config /nonexistent.json") == kExitConfig);
  CHECK(cli("diagnostics-sequence --seed 1 --sizes 10000 --out " + a) == kExitGuard);
  CHECK(cli("gamma-sample --nu 2 --count 5 --seed 3 --out " + a) == kExitOk);
  CHECK(cli("gamma-sample --nu -1 --count 5 --seed 3") == kExitConfig);
  CHECK(cli("--help") == kExitOk);
}
