// Copyright 2026 The quid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quid/cli.hpp"
#include "quid/sequential.hpp"
#include "quid/verify.hpp"
#include "support.hpp"

using namespace quid;
using quid::test::kHalfPi;
using quid::test::read_csv;
using quid::test::read_file;
using quid::test::temp_file;

namespace fs = std::filesystem;

namespace {

int run_binary(const std::string& args) {
  const std::string command = std::string("\"") + QUID_CLI_PATH + "\" " + args;
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse_sweep accepts values and ranges") {
  const cli::SweepSpec single = cli::parse_sweep("0.7");
  CHECK(single.count == 1);
  CHECK(single.start == 0.7);

  const cli::SweepSpec range = cli::parse_sweep("0:1.5:4");
  CHECK(range.count == 4);
  const std::vector<double> values = cli::sweep_values(range);
  REQUIRE(values.size() == 4);
  CHECK(values.front() == 0.0);
  CHECK(values.back() == 1.5);
  CHECK(values[1] == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(cli::parse_sweep("abc"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_sweep("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_sweep("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_sweep("0:1:2.5"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_sweep("0:1:1"), std::invalid_argument);
}

TEST_CASE("run_tradeoff emits the expected rows") {
  const fs::path path = temp_file("tradeoff.csv");
  cli::RunConfig config;
  config.dim = 2;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 3};
  config.output_path = path.string();
  cli::run_tradeoff(config);

  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"theta", "G", "F", "bound_slack"});

  // theta = 0: maximal estimation, F = G = 2/3.
  CHECK(std::stod(rows[1][1]) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // theta = pi/2: blind repeater, G = 1/2, F = 1.
  CHECK(std::stod(rows[3][1]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(rows[3][2]) == doctest::Approx(1.0).epsilon(1e-12));

  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][3])) <= 1e-9);
  }

  // Re-running the identical config produces identical bytes.
  const std::string first = read_file(path);
  cli::run_tradeoff(config);
  CHECK(read_file(path) == first);
  fs::remove(path);
}

TEST_CASE("run_tradeoff json mirror") {
  const fs::path path = temp_file("tradeoff.json");
  cli::RunConfig config;
  config.dim = 3;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 5};
  config.format = cli::OutputFormat::json;
  config.output_path = path.string();
  cli::run_tradeoff(config);

  const nlohmann::json doc = nlohmann::json::parse(read_file(path));
  CHECK(doc["kind"] == "tradeoff");
  REQUIRE(doc["rows"].size() == 5);
  CHECK(doc["rows"][0]["G"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(doc["rows"][4]["F"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  fs::remove(path);
}

TEST_CASE("run_tradeoff rejects bad inputs") {
  cli::RunConfig config;
  config.theta = cli::SweepSpec{0.0, 1.8, 5};
  CHECK_THROWS_AS(cli::run_tradeoff(config), std::invalid_argument);

  config.theta = cli::SweepSpec{0.0, kHalfPi, 5};
  config.output_path = "/nonexistent_quid_dir/out.csv";
  CHECK_THROWS_WITH_AS(cli::run_tradeoff(config),
                       "cannot open output file: /nonexistent_quid_dir/out.csv",
                       std::runtime_error);
}

TEST_CASE("run_sequential frozen value and reductions") {
  const fs::path path = temp_file("sequential.csv");
  cli::RunConfig config;
  config.dim = 3;
  config.n_users = 2;
  config.theta = cli::SweepSpec{std::numbers::pi / 3.0, std::numbers::pi / 3.0, 1};
  config.output_path = path.string();
  cli::run_sequential(config);

  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"theta", "G", "F_N"});
  CHECK(std::stod(rows[1][2]) == doctest::Approx(25.0 / 32.0).epsilon(1e-12));
  fs::remove(path);
}

TEST_CASE("run_sequential with one user equals run_tradeoff") {
  const fs::path tradeoff_path = temp_file("n1_tradeoff.csv");
  const fs::path sequential_path = temp_file("n1_sequential.csv");

  cli::RunConfig config;
  config.dim = 4;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 19};
  config.output_path = tradeoff_path.string();
  cli::run_tradeoff(config);
  config.n_users = 1;
  config.output_path = sequential_path.string();
  cli::run_sequential(config);

  const auto tradeoff_rows = read_csv(tradeoff_path);
  const auto sequential_rows = read_csv(sequential_path);
  REQUIRE(tradeoff_rows.size() == sequential_rows.size());
  for (std::size_t i = 1; i < tradeoff_rows.size(); ++i) {
    CHECK(tradeoff_rows[i][0] == sequential_rows[i][0]);
    CHECK(tradeoff_rows[i][1] == sequential_rows[i][1]);  // G, byte-identical
    CHECK(tradeoff_rows[i][2] == sequential_rows[i][2]);  // F, byte-identical
  }
  fs::remove(tradeoff_path);
  fs::remove(sequential_path);
}

TEST_CASE("run_sequential degrades with chain length at equal estimation") {
  const fs::path n2_path = temp_file("n2.csv");
  const fs::path n10_path = temp_file("n10.csv");

  cli::RunConfig config;
  config.dim = 2;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 33};
  config.n_users = 2;
  config.output_path = n2_path.string();
  cli::run_sequential(config);
  config.n_users = 10;
  config.output_path = n10_path.string();
  cli::run_sequential(config);

  const auto n2_rows = read_csv(n2_path);
  const auto n10_rows = read_csv(n10_path);
  REQUIRE(n2_rows.size() == n10_rows.size());
  for (std::size_t i = 1; i < n2_rows.size(); ++i) {
    // Same theta grid, hence same G column; F degrades pointwise.
    CHECK(n2_rows[i][1] == n10_rows[i][1]);
    CHECK(std::stod(n10_rows[i][2]) <= std::stod(n2_rows[i][2]) + 1e-15);
  }
  fs::remove(n2_path);
  fs::remove(n10_path);
}

TEST_CASE("run_two_user slices") {
  const fs::path path = temp_file("two_user.csv");
  cli::RunConfig config;
  config.dim = 2;
  config.theta_a = cli::SweepSpec{kHalfPi, kHalfPi, 1};
  config.theta_b = cli::SweepSpec{0.0, kHalfPi, 21};
  config.output_path = path.string();
  cli::run_two_user(config);

  auto rows = read_csv(path);
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"theta_a", "theta_b", "G", "F"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    FidelityPoint point;
    point.estimation = std::stod(rows[i][2]);
    point.transmission = std::stod(rows[i][3]);
    CHECK(std::abs(bound_check(point, 2).slack) <= 1e-9);
  }

  // theta_b = pi/2 row: F = (5 - cos 2 theta_a)/6.
  config.theta_a = cli::SweepSpec{0.0, kHalfPi, 9};
  config.theta_b = cli::SweepSpec{kHalfPi, kHalfPi, 1};
  cli::run_two_user(config);
  rows = read_csv(path);
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double theta_a = std::stod(rows[i][0]);
    const double expected = (5.0 - std::cos(2.0 * theta_a)) / 6.0;
    CHECK(std::stod(rows[i][3]) == doctest::Approx(expected).epsilon(1e-12));
  }

  // Diagonal slice matches the homogeneous N = 2 values.
  for (double theta : {0.0, 0.5, 1.2, kHalfPi}) {
    config.theta_a = cli::SweepSpec{theta, theta, 1};
    config.theta_b = cli::SweepSpec{theta, theta, 1};
    cli::run_two_user(config);
    rows = read_csv(path);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][3]) ==
          doctest::Approx(transmission_fidelity_closed_form(2, theta, 2)).epsilon(1e-12));
  }
  fs::remove(path);
}

TEST_CASE("run_simulate emits empirical and exact records") {
  const fs::path path = temp_file("simulate.csv");
  cli::RunConfig config;
  config.dim = 2;
  config.n_users = 2;
  config.n_samples = 20000;
  config.seed = 31;
  config.theta = cli::SweepSpec{0.7, 0.7, 1};
  config.output_path = path.string();
  cli::run_simulate(config);

  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 1 + 4 + 2 * 2);
  CHECK(rows[0] == std::vector<std::string>{"metric", "user", "outcome", "value", "stderr"});
  CHECK(rows[1][0] == "F_empirical");
  CHECK(rows[2][0] == "F_exact");
  CHECK(rows[3][0] == "G_empirical");
  CHECK(rows[4][0] == "G_exact");

  const double f_emp = std::stod(rows[1][3]);
  const double f_err = std::stod(rows[1][4]);
  const double f_exact = std::stod(rows[2][3]);
  CHECK(std::abs(f_emp - f_exact) <= 4.0 * f_err);
  CHECK(f_exact == doctest::Approx(transmission_fidelity_closed_form(2, 0.7, 2)));

  // Outcome frequency rows sum to one per user.
  double user1_total = 0.0;
  for (std::size_t i = 5; i < rows.size(); ++i) {
    if (rows[i][1] == "1") user1_total += std::stod(rows[i][3]);
  }
  CHECK(user1_total == doctest::Approx(1.0).epsilon(1e-12));

  // A sweep is rejected for simulation.
  config.theta = cli::SweepSpec{0.1, 0.4, 3};
  CHECK_THROWS_AS(cli::run_simulate(config), std::invalid_argument);
  fs::remove(path);
}

TEST_CASE("verification suite passes and reacts to injected faults") {
  VerifyOptions fast;
  fast.mc_samples = 30000;
  const std::vector<CheckResult> results = run_all_checks(fast);
  CHECK(results.size() >= 20);
  for (const CheckResult& r : results) {
    INFO(r.name, ": measured=", r.measured, " limit=", r.threshold);
    CHECK(r.passed);
  }
  std::ostringstream sink;
  CHECK(print_report(sink, results) == 0);

  VerifyOptions broken = fast;
  broken.saturation_tolerance = 0.0;
  const std::vector<CheckResult> broken_results = run_all_checks(broken);
  int failures = 0;
  for (const CheckResult& r : broken_results) {
    if (!r.passed) ++failures;
  }
  CHECK(failures > 0);
}

TEST_CASE("binary exit codes and config file handling") {
  const fs::path out = temp_file("cli_out.csv");
  const fs::path cfg = temp_file("cli_cfg.ini");

  CHECK(run_binary("--help > /dev/null 2>&1") == 0);
  CHECK(run_binary("tradeoff --no-such-flag > /dev/null 2>&1") == 1);
  CHECK(run_binary("tradeoff --theta 1.7 > /dev/null 2>&1") == 1);
  CHECK(run_binary("frobnicate > /dev/null 2>&1") == 1);

  {
    std::ofstream config_file(cfg);
    config_file << "dim = 3\n" << "theta = 0:1.5707963267948966:3\n";
  }
  // Config file supplies dim = 3; the command line overrides it back to 2.
  CHECK(run_binary("tradeoff --config \"" + cfg.string() + "\" --dim 2 --out \"" +
                   out.string() + "\"") == 0);
  auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));  // d = 2

  CHECK(run_binary("tradeoff --config \"" + cfg.string() + "\" --out \"" + out.string() +
                   "\"") == 0);
  rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.5).epsilon(1e-14));  // d = 3

  {
    std::ofstream config_file(cfg);
    config_file << "unknown_key = 1\n";
  }
  CHECK(run_binary("tradeoff --config \"" + cfg.string() + "\" > /dev/null 2>&1") == 1);

  fs::remove(out);
  fs::remove(cfg);
}
