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

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "quid/cli.hpp"
#include "quid/sequential.hpp"

namespace {

using quid::cli::OutputFormat;
using quid::cli::RunConfig;

struct SubcommandState {
  RunConfig config;
  std::string theta = "";
  std::string theta_a = "";
  std::string theta_b = "";
  std::string format = "csv";
};

// Options shared by the curve-producing subcommands.
void add_common_options(CLI::App* sub, SubcommandState* state) {
  sub->add_option("--dim", state->config.dim, "Hilbert space dimension d")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  sub->add_option("--seed", state->config.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", state->config.output_path,
                  "Output file path (default: write to stdout)");
  sub->add_option("--format", state->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->set_config("--config", "", "Flat key = value configuration file; "
                                  "command-line flags take precedence");
  sub->allow_config_extras(false);
}

void finalize(SubcommandState* state) {
  state->config.format =
      state->format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!state->theta.empty()) state->config.theta = quid::cli::parse_sweep(state->theta);
  if (!state->theta_a.empty()) state->config.theta_a = quid::cli::parse_sweep(state->theta_a);
  if (!state->theta_b.empty()) state->config.theta_b = quid::cli::parse_sweep(state->theta_b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quid: fidelity trade-offs of minimally disturbing qudit measurements"};
  app.require_subcommand(1);

  const std::string full_sweep = "0:1.5707963267948966:101";

  SubcommandState tradeoff;
  tradeoff.theta = full_sweep;
  CLI::App* tradeoff_cmd = app.add_subcommand(
      "tradeoff", "Single-user trade-off curve: theta,G,F,bound_slack");
  add_common_options(tradeoff_cmd, &tradeoff);
  tradeoff_cmd->add_option("--theta", tradeoff.theta,
                           "Probe angle, value or start:stop:count sweep")
      ->capture_default_str();

  SubcommandState sequential;
  sequential.theta = full_sweep;
  CLI::App* sequential_cmd = app.add_subcommand(
      "sequential", "Homogeneous N-user chain: theta,G,F_N");
  add_common_options(sequential_cmd, &sequential);
  sequential_cmd->add_option("--theta", sequential.theta,
                             "Probe angle, value or start:stop:count sweep")
      ->capture_default_str();
  sequential_cmd->add_option("--users", sequential.config.n_users, "Number of users N")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();

  SubcommandState two_user;
  two_user.theta_a = full_sweep;
  two_user.theta_b = full_sweep;
  CLI::App* two_user_cmd = app.add_subcommand(
      "two-user", "Heterogeneous two-user chain: theta_a,theta_b,G,F");
  add_common_options(two_user_cmd, &two_user);
  two_user_cmd->add_option("--theta-a", two_user.theta_a,
                           "First probe angle, value or start:stop:count sweep")
      ->capture_default_str();
  two_user_cmd->add_option("--theta-b", two_user.theta_b,
                           "Second probe angle, value or start:stop:count sweep")
      ->capture_default_str();

  SubcommandState simulate;
  simulate.theta = "0.78539816339744828";
  simulate.config.n_users = 2;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Stochastic chain trajectories with empirical fidelities");
  add_common_options(simulate_cmd, &simulate);
  simulate_cmd->add_option("--theta", simulate.theta, "Probe angle (single value)")
      ->capture_default_str();
  simulate_cmd->add_option("--users", simulate.config.n_users, "Number of users N")
      ->check(CLI::Range(1, 10000))
      ->capture_default_str();
  simulate_cmd->add_option("--samples", simulate.config.n_samples,
                           "Number of Haar-random input signals")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{1000000000}))
      ->capture_default_str();

  double verify_tolerance = 1e-9;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Run the full invariant suite and print a pass/fail table");
  verify_cmd->add_option("--tolerance", verify_tolerance,
                         "Allowed |slack| for bound-saturation checks")
      ->capture_default_str();
  verify_cmd->set_config("--config", "", "Flat key = value configuration file");
  verify_cmd->allow_config_extras(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (tradeoff_cmd->parsed()) {
      finalize(&tradeoff);
      quid::cli::run_tradeoff(tradeoff.config);
    } else if (sequential_cmd->parsed()) {
      finalize(&sequential);
      quid::cli::run_sequential(sequential.config);
    } else if (two_user_cmd->parsed()) {
      finalize(&two_user);
      quid::cli::run_two_user(two_user.config);
    } else if (simulate_cmd->parsed()) {
      finalize(&simulate);
      quid::cli::run_simulate(simulate.config);
    } else if (verify_cmd->parsed()) {
      return quid::cli::run_verify(std::cout, verify_tolerance);
    }
  } catch (const quid::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
