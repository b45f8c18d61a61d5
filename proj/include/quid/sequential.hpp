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
#include <stdexcept>
#include <vector>

#include "quid/fidelity.hpp"
#include "quid/linalg.hpp"
#include "quid/measurement.hpp"

namespace quid {

/// Cap on the number of outcome sequences (d^N) an exact enumeration may
/// visit before the operation is refused.
inline constexpr std::int64_t kDefaultEnumerationBudget = 1'000'000;

/// Thrown when an exact enumeration would exceed its term budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An N-user transmission line: user i measures with probe angle thetas[i],
/// all in [0, pi/2], and forwards the conditional state to user i+1.
class ChainConfig {
 public:
  ChainConfig(int dim, std::vector<double> thetas);

  int dim() const { return dim_; }
  int users() const { return static_cast<int>(thetas_.size()); }
  const std::vector<double>& thetas() const { return thetas_; }
  bool homogeneous() const;

 private:
  int dim_;
  std::vector<double> thetas_;
};

/// One full outcome record of a chain.
struct OutcomeSequence {
  std::vector<int> outcomes;        // k_1 ... k_N, each in [0, d)
  double probability = 0.0;         // <psi| A_seq^dag A_seq |psi>
  std::vector<int> multiplicities;  // count of each outcome value, sums to N
};

/// The frequency-weighted diagonal density matrix sum_j (n_j / N) |j><j|
/// inferred from an outcome record with multiplicities n_j.
struct CollectiveEstimate {
  RealMatrix density;
};
CollectiveEstimate collective_estimate(const std::vector<int>& multiplicities);

/// Product operator A_{k_N} ... A_{k_1} of one outcome sequence. All factors
/// are diagonal, so the product is order-independent.
ComplexMatrix sequence_operator(const ChainConfig& config, const std::vector<int>& outcomes);

/// Exhaustive distribution over all d^N outcome sequences for input `psi`.
/// Probabilities sum to 1.
std::vector<OutcomeSequence> outcome_sequence_distribution(
    const ChainConfig& config, const PureState& psi,
    std::int64_t budget = kDefaultEnumerationBudget);

/// Outcome distribution of one user (1-based index) after marginalizing all
/// other users. Equals the single-user distribution at that user's angle,
/// independent of chain length.
RealVector marginal_outcome_distribution(const ChainConfig& config, const PureState& psi,
                                         int user_index,
                                         std::int64_t budget = kDefaultEnumerationBudget);

/// Haar-averaged transmission fidelity after the whole chain, evaluated by
/// enumerating all d^N sequence operators and applying the trace formula
/// F = (d + sum |tr A_seq|^2) / (d(d+1)). Supports heterogeneous chains.
double transmission_fidelity_chain(const ChainConfig& config,
                                   std::int64_t budget = kDefaultEnumerationBudget);

/// Same quantity for a homogeneous chain, aggregated over outcome
/// multiplicities with multinomial weights instead of raw sequences:
/// F_N = (d + S) / (d(d+1)) with
/// S = sum over compositions (n_0..n_{d-1}) of N of
///     multinomial(N; n) * (sum_i J^(N - n_i) L^(n_i))^2.
/// Reduces to (2 + sin(theta)^(2N))/3 for d = 2 and
/// (1 + sin(theta)^(2N))/2 for d = 3.
double transmission_fidelity_closed_form(int dim, double theta, int n_users);

/// Haar-averaged estimation fidelity when only the last user's outcome is
/// used with the inference rule k -> |k>. Independent of the number of
/// users; equals the single-user value (1 + L(theta_last)^2)/(d+1).
double estimation_fidelity_single_measure(int dim, double theta_last);

/// The same quantity evaluated the long way, by summing
/// <k_last| A_seq^dag A_seq |k_last> over all d^N outcome sequences of the
/// chain. Independent cross-check of the chain-length independence.
double estimation_fidelity_last_user_enumeration(
    const ChainConfig& config, std::int64_t budget = kDefaultEnumerationBudget);

/// Haar-averaged estimation fidelity when the full outcome record of a
/// homogeneous chain is used with the frequency-based collective estimate:
/// G = (d + sum_seq tr[rho_seq A_seq^dag A_seq]) / (d(d+1)),
/// aggregated over multiplicities. Matches the single-measure value for
/// d in {2, 3, 4}.
double estimation_fidelity_collective(int dim, double theta, int n_users,
                                      std::int64_t budget = kDefaultEnumerationBudget);

/// Reference implementation of the same sum over raw outcome sequences;
/// kept as an independent cross-check of the multiplicity aggregation.
double estimation_fidelity_collective_enumeration(
    int dim, double theta, int n_users, std::int64_t budget = kDefaultEnumerationBudget);

/// Fidelities of a two-user chain with probe angles theta_a (first user)
/// and theta_b (second user): G is the single-user value at theta_b, F is
/// the trace formula over the d^2 products A_{k_b} A_{k_a}. For d = 2,
/// F = (2 + sin(theta_a)^2 sin(theta_b)^2) / 3.
FidelityPoint two_user_fidelities(int dim, double theta_a, double theta_b);

struct TwoUserSample {
  double theta_a = 0.0;
  double theta_b = 0.0;
  FidelityPoint point;
};

/// (G, F) over a uniform grid x grid sweep of (theta_a, theta_b). Every
/// point respects the trade-off bound; the theta_a = pi/2 row saturates it.
std::vector<TwoUserSample> two_user_region(int dim, int grid);

/// Empirical chain statistics from stochastic trajectories.
struct ChainTrajectoryStats {
  double transmission = 0.0;  // mean |<psi_in|psi_out>|^2
  double transmission_stderr = 0.0;
  double estimation = 0.0;  // mean |<psi_in|k_last>|^2
  double estimation_stderr = 0.0;
  RealMatrix outcome_frequencies;  // users x d, rows sum to 1
  std::int64_t n_signals = 0;
};

/// Draws Haar-random signals and pushes each through the chain, sampling
/// one outcome per user. Bit-reproducible for a fixed seed regardless of
/// n_threads.
ChainTrajectoryStats simulate_chain(const ChainConfig& config, std::int64_t n_signals,
                                    std::uint64_t rng_seed, int n_threads = 0);

}  // namespace quid
