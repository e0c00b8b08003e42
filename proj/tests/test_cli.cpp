// Drives the installed CLI binary end to end: argument validation, exit
// codes, artifact shapes, config-file merging, and byte-level determinism.
// The binary path arrives as argv[1] from ctest.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli_path;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string command = g_cli_path + " " + args + " 2>/tmp/hb_cli_stderr.txt";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("").exit_code == 2);                                  // no subcommand
  CHECK(run_cli("sample --N 100 --m 2 --k 3 --bogus 1").exit_code == 2);  // unknown flag
  CHECK(run_cli("density --N 2 --m 2 --k 2").exit_code == 2);         // N < m + k
  CHECK(run_cli("sample --N 100 --m 2").exit_code == 2);              // missing --k
  CHECK(run_cli("sample --N 1e9 --m 1 --k 1 --seed 1").exit_code == 2);  // sampling cap
  CHECK(run_cli("experiment mdp-entry --N 1e6 --t 1 --b 0.7").exit_code == 2);  // b range
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("sample produces a valid scaled block") {
  const RunResult r = run_cli("sample --N 100 --m 2 --k 3 --seed 7");
  REQUIRE(r.exit_code == 0);
  const auto artifact = nlohmann::json::parse(r.output);
  CHECK(artifact["command"] == "sample");
  CHECK(artifact["config"]["seed"]["value"] == 7);
  REQUIRE(artifact["result"]["entries"].size() == 2);
  CHECK(artifact["result"]["entries"][0].size() == 3);
}

TEST_CASE("density point query matches the exact constant") {
  const RunResult r = run_cli("density --N 3 --m 1 --k 1");
  REQUIRE(r.exit_code == 0);
  const auto artifact = nlohmann::json::parse(r.output);
  const double log_value = artifact["result"]["log_value"].get<double>();
  CHECK(log_value == doctest::Approx(std::log(0.5) - 0.5 * std::log(3.0)).epsilon(1e-12));
  CHECK(artifact["result"]["in_support"] == true);

  const RunResult tail = run_cli("density --N 3 --t 0.5 --scaling unscaled");
  REQUIRE(tail.exit_code == 0);
  const auto tail_artifact = nlohmann::json::parse(tail.output);
  CHECK(tail_artifact["result"]["tail_probability"].get<double>() ==
        doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("experiment schedule parsing accepts scientific notation lists") {
  const RunResult r =
      run_cli("experiment mdp-entry --t 1 --b 0.25 --N 1e6,1e7,1e8 --seed 1");
  REQUIRE(r.exit_code == 0);
  const auto artifact = nlohmann::json::parse(r.output);
  REQUIRE(artifact["rows"].size() == 3);
  CHECK(artifact["rows"][2]["N"] == 100000000);
  CHECK(artifact["rows"][2]["estimate"].get<double>() == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(artifact["config"]["schedule"]["b"] == 0.25);
}

TEST_CASE("rate evaluates JSON-described inputs") {
  {
    std::ofstream cfg("/tmp/hb_rate_cfg.json");
    cfg << R"({"function": "orthogonal_ldp_rate", "entries": [[0.6]]})";
  }
  const RunResult r = run_cli("rate --config /tmp/hb_rate_cfg.json");
  REQUIRE(r.exit_code == 0);
  const auto artifact = nlohmann::json::parse(r.output);
  CHECK(artifact["result"]["value"].get<double>() ==
        doctest::Approx(0.2231435513142098).epsilon(1e-12));

  {
    std::ofstream cfg("/tmp/hb_rate_cfg.json");
    cfg << R"({"function": "kl_gaussian", "mean": [1.0], "covariance": [[1.0]]})";
  }
  const RunResult kl = run_cli("rate --config /tmp/hb_rate_cfg.json");
  REQUIRE(kl.exit_code == 0);
  CHECK(nlohmann::json::parse(kl.output)["result"]["value"].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("config file merges with flag precedence") {
  {
    std::ofstream cfg("/tmp/hb_merge_cfg.json");
    cfg << R"({"N": 3, "m": 1, "k": 1, "seed": {"value": 11, "stream": 2}})";
  }
  // config supplies everything
  const RunResult base = run_cli("density --config /tmp/hb_merge_cfg.json");
  REQUIRE(base.exit_code == 0);
  CHECK(nlohmann::json::parse(base.output)["config"]["N"] == 3);

  // flag overrides the config's N
  const RunResult over = run_cli("density --config /tmp/hb_merge_cfg.json --N 10");
  REQUIRE(over.exit_code == 0);
  CHECK(nlohmann::json::parse(over.output)["config"]["N"] == 10);
}

TEST_CASE("artifacts are byte-identical across reruns and written to files") {
  const std::string cmd =
      "experiment mdp-block --N 32,64 --t 0.5 --b 0.25 --m 2 --k 2 --replicas 500 --seed 99";
  const RunResult once = run_cli(cmd + " --out /tmp/hb_det_a.json");
  REQUIRE(once.exit_code == 0);
  const RunResult twice = run_cli(cmd + " --out /tmp/hb_det_b.json --threads 2");
  REQUIRE(twice.exit_code == 0);
  CHECK(slurp("/tmp/hb_det_a.json") == slurp("/tmp/hb_det_b.json"));

  // CSV projection carries the same rows
  const RunResult csv = run_cli(cmd + " --format csv --out /tmp/hb_det.csv");
  REQUIRE(csv.exit_code == 0);
  const std::string csv_text = slurp("/tmp/hb_det.csv");
  CHECK(csv_text.rfind("N,scale,speed", 0) == 0);
  const auto artifact = nlohmann::json::parse(slurp("/tmp/hb_det_a.json"));
  CHECK(csv_text.find("\n32,") != std::string::npos);
  CHECK(artifact["rows"][0]["N"] == 32);
}

TEST_CASE("unwritable output path exits with status 1") {
  const RunResult r = run_cli("density --N 3 --m 1 --k 1 --out /nonexistent-dir/x.json");
  CHECK(r.exit_code == 1);
}

TEST_CASE("environment variable supplies the default seed") {
  const std::string with_env = "HAARBLOCKS_SEED=31337 " + g_cli_path;
  std::array<char, 4096> buffer{};
  std::string output;
  FILE* pipe =
      popen((with_env + " sample --N 10 --m 1 --k 2 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), n);
  REQUIRE(pclose(pipe) == 0);
  CHECK(nlohmann::json::parse(output)["config"]["seed"]["value"] == 31337);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-haarblocks-binary>\n");
    return 1;
  }
  g_cli_path = argv[1];
  doctest::Context context;
  context.applyCommandLine(1, argv);
  return context.run();
}
