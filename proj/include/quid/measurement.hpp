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
#include <random>
#include <vector>

#include "quid/linalg.hpp"

namespace quid {

/// Dimension and probe angle of one measurement device.
///
/// theta in [0, pi/2] interpolates between a projective measurement of the
/// computational basis (theta = 0, maximum information, maximum disturbance)
/// and the identity channel (theta = pi/2, no information, no disturbance).
class ProbeConfig {
 public:
  ProbeConfig(int dim, double theta);

  int dim() const { return dim_; }
  double theta() const { return theta_; }

 private:
  int dim_;
  double theta_;
};

/// Normalization coefficient of the probe superposition,
/// (sqrt(1 + d tan^2(theta)) - 1) / (sqrt(d) tan(theta)),
/// extended continuously to 0 at theta = 0 and 1 at theta = pi/2.
double probe_normalization(const ProbeConfig& config);

/// The probe state cos(theta)|0> + gamma sin(theta) (1/sqrt d) sum_s |s>.
/// Exactly unit norm for every (d, theta).
PureState probe_state(const ProbeConfig& config);

/// Two-qudit controlled shift |i>|s> -> |i>|i + s mod d> as a d^2 x d^2
/// permutation matrix, basis index (i, s) -> i*d + s. Entries are exact
/// zeros and ones.
ComplexMatrix controlled_shift_gate(int dim);

/// The d measurement (Kraus) operators of one device, each a real diagonal
/// d x d matrix with entry `matched` at the outcome index and `unmatched`
/// elsewhere. Completeness sum_k A_k^dag A_k = I holds by construction and
/// is validated at build time.
class MeasurementModel {
 public:
  /// Builds the operators from the two diagonal amplitudes.
  MeasurementModel(const ProbeConfig& config, double matched, double unmatched);

  /// Adopts externally constructed operators; validates that they are real,
  /// diagonal, of the matched/unmatched form, and complete.
  MeasurementModel(const ProbeConfig& config, std::vector<ComplexMatrix> kraus);

  const ProbeConfig& config() const { return config_; }
  int dim() const { return config_.dim(); }

  /// Diagonal amplitude at the index matching the outcome (L).
  double matched_amplitude() const { return matched_; }
  /// Diagonal amplitude at every other index (J).
  double unmatched_amplitude() const { return unmatched_; }

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const ComplexMatrix& kraus(int k) const;

  /// POVM element A_k^dag A_k.
  ComplexMatrix povm_element(int k) const;

  /// Outcome probability <psi| A_k^dag A_k |psi>.
  double outcome_probability(int k, const PureState& psi) const;

 private:
  void validate() const;

  ProbeConfig config_;
  double matched_;
  double unmatched_;
  std::vector<ComplexMatrix> kraus_;
};

/// Builds the model directly from the diagonal-amplitude formulas
/// L = cos(theta) + gamma sin(theta)/sqrt(d), J = gamma sin(theta)/sqrt(d).
MeasurementModel build_model(const ProbeConfig& config);

/// Builds the same model by the unitary route: couples the signal to the
/// probe with the controlled shift gate and projects the probe register,
/// A_k = (I (x) <k|) C_d (I (x) |omega>). Numerically independent of
/// build_model; the two must agree elementwise.
MeasurementModel build_model_from_gate(const ProbeConfig& config);

/// One stochastic application of the measurement.
struct SampledOutcome {
  int outcome;
  PureState state;     // conditional post-measurement state A_k|psi>/sqrt(p_k)
  double probability;  // p_k of the sampled outcome
};

/// Samples an outcome k with probability p_k = <psi|A_k^dag A_k|psi> and
/// returns the conditional state. Zero-probability branches are never
/// sampled; a state with no support on any branch is rejected.
SampledOutcome apply_and_sample(const MeasurementModel& model, const PureState& psi,
                                std::mt19937_64& rng);
SampledOutcome apply_and_sample(const MeasurementModel& model, const PureState& psi,
                                std::uint64_t rng_seed);

}  // namespace quid
