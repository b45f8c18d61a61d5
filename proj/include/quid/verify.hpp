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

namespace quid {

/// Outcome of one named invariant check.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed value (max error, or min slack)
  double threshold = 0.0;  // the limit it was held against
  std::string detail;
};

struct VerifyOptions {
  double saturation_tolerance = 1e-9;   // |slack| allowed on optimal points
  double exact_tolerance = 1e-12;       // agreement between exact routes
  double enumeration_tolerance = 1e-10; // enumeration vs closed forms
  double mc_sigma = 4.0;                // Monte Carlo agreement, in stderrs
  std::int64_t mc_samples = 200000;
  std::uint64_t seed = 0x51D0BEEFULL;
};

/// Runs every module invariant and returns one result per check.
std::vector<CheckResult> run_all_checks(const VerifyOptions& options);

/// Prints one row per check; returns the number of failures.
int print_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace quid
