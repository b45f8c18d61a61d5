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
#include <vector>

#include "quid/linalg.hpp"
#include "quid/measurement.hpp"

namespace quid {

enum class FidelityMethod { analytic, monte_carlo, enumeration };

/// A point on the information/disturbance plane.
///
/// `estimation` (G) is the mean overlap of the inferred state with the
/// input, `transmission` (F) the mean overlap of the forwarded state with
/// the input, both averaged over Haar-random pure inputs. The stderr fields
/// are zero for exact methods.
struct FidelityPoint {
  double estimation = 0.0;
  double transmission = 0.0;
  FidelityMethod method = FidelityMethod::analytic;
  double estimation_stderr = 0.0;
  double transmission_stderr = 0.0;
};

/// Evaluation of the quadratic trade-off bound
///   (F - F0)^2 + d^2 (G - G0)^2 + 2(d-2)(F - F0)(G - G0) <= (d-1)/(d+1)^2
/// with F0 = (d+2)/(2(d+1)) and G0 = 3/(2(d+1)). slack = rhs - lhs; any
/// physical measurement has slack >= 0 (up to rounding), and an optimal one
/// has slack = 0.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool saturated = false;
};

/// Fidelities for one fixed input state (no averaging).
struct StateFidelity {
  double transmission = 0.0;  // F_psi = sum_k |<psi|A_k|psi>|^2
  double estimation = 0.0;    // G_psi = sum_k p_k |<psi|k>|^2
};

/// Exact per-state fidelities of the model, inferring outcome k as |k>.
StateFidelity fidelity_per_state(const MeasurementModel& model, const PureState& psi);

/// Closed-form Haar averages for this measurement family:
///   F = (1 + (L + (d-1) J)^2) / (d+1),   G = (1 + L^2) / (d+1).
FidelityPoint average_fidelity_analytic(const MeasurementModel& model);

/// Haar-averaged fidelities of an arbitrary complete measurement
/// {A_k} with pure estimate states {phi_k}:
///   F = (d + sum_k |tr A_k|^2) / (d(d+1)),
///   G = (d + sum_k <phi_k|A_k^dag A_k|phi_k>) / (d(d+1)).
/// Rejects operator sets with sum_k A_k^dag A_k farther than 1e-9 from I.
FidelityPoint average_fidelity_banaszek(const std::vector<ComplexMatrix>& kraus,
                                        const std::vector<PureState>& estimates);

/// Overload for mixed (density matrix) estimates: the G term becomes
/// tr[rho_k A_k^dag A_k].
FidelityPoint average_fidelity_banaszek(const std::vector<ComplexMatrix>& kraus,
                                        const std::vector<RealMatrix>& estimate_densities);

/// Sample mean of fidelity_per_state over Haar-random inputs, with sample
/// standard errors. Bit-reproducible for a fixed seed regardless of
/// n_threads (n_threads <= 0 picks a default).
FidelityPoint average_fidelity_monte_carlo(const MeasurementModel& model,
                                           std::int64_t n_samples, std::uint64_t rng_seed,
                                           int n_threads = 0);

/// Evaluates the trade-off bound at a fidelity point.
BoundReport bound_check(const FidelityPoint& point, int dim, double tolerance = 1e-9);

struct CurveSample {
  double theta = 0.0;
  FidelityPoint point;
};

/// Analytic (G, F) samples for theta swept uniformly over [0, pi/2];
/// G is non-increasing and F non-decreasing along the sweep. n_points >= 2.
std::vector<CurveSample> tradeoff_curve(int dim, int n_points);

}  // namespace quid
