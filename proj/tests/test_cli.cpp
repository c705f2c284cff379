#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "aniso/cli/config.hpp"
#include "aniso/errors.hpp"

namespace fs = std::filesystem;
using aniso::cli::ConfigError;
using aniso::cli::RunConfig;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aniso_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string command = std::string(ANISO_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    RunConfig config;
    aniso::cli::apply_setting(config, "model.hurst", "0.3, 0.7");
    CHECK(config.hurst.h1() == 0.3);
    CHECK(config.hurst.h2() == 0.7);
    aniso::cli::apply_setting(config, "model.theta", "0.001");
    CHECK_FALSE(config.theta.automatic);
    CHECK(config.resolved_theta() == 0.001);
    aniso::cli::apply_setting(config, "model.theta", "auto");
    CHECK(config.theta.automatic);
    aniso::cli::apply_setting(config, "simulate.time_grid", "1, 4, 4");
    CHECK(config.time_grid.count == 4);
    aniso::cli::apply_setting(config, "test.witness_paths", "5000");
    CHECK(config.witness_paths == 5000u);

    CHECK_THROWS_AS(aniso::cli::apply_setting(config, "model.colour", "1"), ConfigError);
    CHECK_THROWS_AS(aniso::cli::apply_setting(config, "run.paths", "many"), ConfigError);
    CHECK_THROWS_AS(aniso::cli::apply_setting(config, "run.seed", "-4"), ConfigError);
    CHECK_THROWS(aniso::cli::apply_setting(config, "model.hurst", "0.5,1.5"));
    CHECK_THROWS_AS(aniso::cli::parse_hurst("0.5"), ConfigError);
  }

  TEST_CASE("config files") {
    const fs::path dir = scratch("config");
    write_file(dir / "good.ini", "[model]\nhurst = 0.2,0.6\ntheta = 0\n[run]\nseed = 7\n");
    const RunConfig config = aniso::cli::load_config((dir / "good.ini").string());
    CHECK(config.hurst.h1() == 0.2);
    CHECK(config.seed == 7u);
    CHECK(config.resolved_theta() == 0.0);

    write_file(dir / "unknown.ini", "[model]\nhurst = 0.2,0.6\nflavour = mint\n");
    CHECK_THROWS_AS(aniso::cli::load_config((dir / "unknown.ini").string()), ConfigError);
    write_file(dir / "garbled.ini", "[model\nhurst = \n");
    CHECK_THROWS_AS(aniso::cli::load_config((dir / "garbled.ini").string()), ConfigError);
    CHECK_THROWS_AS(aniso::cli::load_config((dir / "missing.ini").string()), ConfigError);
  }

  TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    const std::string out = " --out " + dir.string();
    CHECK(run("theta-bound" + out) == 0);
    CHECK(run("verify --theta 100" + out) == 1);
    CHECK(run("simulate --theta 100" + out) == 1);
    CHECK(run("kernel-eval --no-such-flag" + out) == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("kernel-eval --hurst 1.2,0.5" + out) == 2);
    write_file(dir / "bad.ini", "[model]\nhurst = 0.5,0.5\nsurprise = 1\n");
    CHECK(run("kernel-eval --config " + (dir / "bad.ini").string() + out) == 2);
  }

  TEST_CASE("reports") {
    const fs::path a = scratch("report");
    const std::string args = "kernel-eval --theta 0 --out " + a.string();
    REQUIRE(run(args) == 0);
    const std::string first_report = slurp(a / "kernel-eval.json");
    const std::string first_csv = slurp(a / "kernel_values.csv");
    REQUIRE(run(args) == 0);
    // The report is byte-identical across runs; wall time lives in the sidecar.
    CHECK(slurp(a / "kernel-eval.json") == first_report);
    CHECK(slurp(a / "kernel_values.csv") == first_csv);
    CHECK(fs::exists(a / "kernel-eval.timing.json"));

    const auto report = nlohmann::json::parse(slurp(a / "kernel-eval.json"));
    CHECK(report.at("schema") == "report/1");
    CHECK(report.at("command") == "kernel-eval");
    CHECK(report.at("tool_version") == aniso::cli::kToolVersion);
    CHECK(report.at("pass") == true);
    CHECK(report.at("config").at("theta") == 0.0);

    std::istringstream csv(slurp(a / "kernel_values.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "v1,v2,F_H1,F_H2,R0,R_theta");
    bool found = false;
    while (std::getline(csv, line)) {
      if (line.rfind("1,1,", 0) != 0) continue;
      found = true;
      std::istringstream row(line);
      std::string cell;
      for (int i = 0; i < 5; ++i) std::getline(row, cell, ',');
      CHECK(std::fabs(std::stod(cell) - std::exp(-1.0)) < 1e-15);
    }
    CHECK(found);
  }

  TEST_CASE("simulate determinism") {
    const fs::path a = scratch("sim");
    const std::string args = "simulate --theta 0 --paths 2000 --seed 11 --out " + a.string();
    REQUIRE(run(args) == 0);
    const std::string first_sample = slurp(a / "sample_0.csv");
    const std::string first_report = slurp(a / "simulate.json");
    REQUIRE(run(args) == 0);
    CHECK(slurp(a / "sample_0.csv") == first_sample);
    CHECK(slurp(a / "simulate.json") == first_report);
  }
}
