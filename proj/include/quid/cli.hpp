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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace quid::cli {

enum class OutputFormat { csv, json };

/// A single value ("0.7") or an inclusive linear sweep ("start:stop:count").
struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
};

SweepSpec parse_sweep(const std::string& text);
std::vector<double> sweep_values(const SweepSpec& sweep);

/// Resolved parameters of one command invocation.
struct RunConfig {
  int dim = 2;
  SweepSpec theta{0.0, 0.0, 1};
  SweepSpec theta_a{0.0, 0.0, 1};
  SweepSpec theta_b{0.0, 0.0, 1};
  int n_users = 1;
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 1;
  std::string output_path;  // empty writes to stdout
  OutputFormat format = OutputFormat::csv;
};

/// Emits `theta,G,F,bound_slack` over the theta sweep: the single-user
/// trade-off curve with the bound slack of every point.
void run_tradeoff(const RunConfig& config);

/// Emits `theta,G,F_N` over the theta sweep for a homogeneous chain of
/// n_users devices.
void run_sequential(const RunConfig& config);

/// Emits `theta_a,theta_b,G,F` over the (theta_a, theta_b) sweep grid for
/// the heterogeneous two-user chain.
void run_two_user(const RunConfig& config);

/// Runs stochastic chain trajectories and emits long-format records
/// `metric,user,outcome,value,stderr` with empirical and exact fidelities
/// plus per-user outcome frequencies.
void run_simulate(const RunConfig& config);

/// Runs the full invariant suite, prints one row per check to `out`, and
/// returns 0 when everything passes, 3 otherwise. `saturation_tolerance`
/// is the allowed |slack| for bound-saturation checks.
int run_verify(std::ostream& out, double saturation_tolerance = 1e-9);

}  // namespace quid::cli
