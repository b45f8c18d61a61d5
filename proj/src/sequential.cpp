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

#include "quid/sequential.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "chunked_reduce.hpp"

namespace quid {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<MeasurementModel> build_chain_models(const ChainConfig& config) {
  std::vector<MeasurementModel> models;
  models.reserve(static_cast<std::size_t>(config.users()));
  for (double theta : config.thetas()) {
    models.push_back(build_model(ProbeConfig(config.dim(), theta)));
  }
  return models;
}

std::int64_t sequence_count_or_throw(int dim, int n_users, std::int64_t budget) {
  std::int64_t count = 1;
  for (int i = 0; i < n_users; ++i) {
    if (count > budget / dim) {
      throw BudgetExceededError(
          "enumeration over " + std::to_string(dim) + "^" + std::to_string(n_users) +
          " outcome sequences exceeds the budget of " + std::to_string(budget) +
          " terms; use the closed-form path for homogeneous chains");
    }
    count *= dim;
  }
  if (count > budget) {
    throw BudgetExceededError("enumeration exceeds the budget of " + std::to_string(budget) +
                              " terms");
  }
  return count;
}

// Visits every outcome sequence in lexicographic order (last index fastest).
template <typename Fn>
void for_each_sequence(int dim, int n_users, Fn&& fn) {
  std::vector<int> outcomes(static_cast<std::size_t>(n_users), 0);
  while (true) {
    fn(outcomes);
    int pos = n_users - 1;
    while (pos >= 0 && outcomes[static_cast<std::size_t>(pos)] == dim - 1) {
      outcomes[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++outcomes[static_cast<std::size_t>(pos)];
  }
}

// Diagonal of the product operator for one outcome sequence.
RealVector sequence_diagonal(const std::vector<MeasurementModel>& models,
                             const std::vector<int>& outcomes) {
  const int d = models.front().dim();
  RealVector diag = RealVector::Ones(d);
  for (std::size_t u = 0; u < outcomes.size(); ++u) {
    const double matched = models[u].matched_amplitude();
    const double unmatched = models[u].unmatched_amplitude();
    const int k = outcomes[u];
    for (int i = 0; i < d; ++i) {
      diag(i) *= (i == k) ? matched : unmatched;
    }
  }
  return diag;
}

// Visits every composition (n_0..n_{d-1}) of n_users together with its
// multinomial coefficient. The coefficient is built incrementally from
// binomials, each exact in double precision at the chain lengths the
// enumeration budget admits.
template <typename Fn>
void for_each_composition(int dim, int n_users, Fn&& fn) {
  std::vector<int> counts(static_cast<std::size_t>(dim), 0);
  auto binomial = [](int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
      r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return r;
  };
  auto recurse = [&](auto&& self, int slot, int remaining, double coeff) -> void {
    if (slot == dim - 1) {
      counts[static_cast<std::size_t>(slot)] = remaining;
      fn(counts, coeff);
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      counts[static_cast<std::size_t>(slot)] = n;
      self(self, slot + 1, remaining - n, coeff * binomial(remaining, n));
    }
  };
  recurse(recurse, 0, n_users, 1.0);
}

void check_user_count(int n_users) {
  if (n_users < 1) {
    throw std::invalid_argument("chain requires at least one user");
  }
}

}  // namespace

ChainConfig::ChainConfig(int dim, std::vector<double> thetas)
    : dim_(dim), thetas_(std::move(thetas)) {
  if (dim_ < 2) {
    throw std::invalid_argument("ChainConfig: dim must be >= 2");
  }
  if (thetas_.empty()) {
    throw std::invalid_argument("ChainConfig: at least one user required");
  }
  for (double theta : thetas_) {
    if (!(theta >= 0.0 && theta <= kHalfPi)) {
      throw std::invalid_argument("ChainConfig: every theta must lie in [0, pi/2]");
    }
  }
}

bool ChainConfig::homogeneous() const {
  for (double theta : thetas_) {
    if (theta != thetas_.front()) return false;
  }
  return true;
}

CollectiveEstimate collective_estimate(const std::vector<int>& multiplicities) {
  if (multiplicities.empty()) {
    throw std::invalid_argument("collective_estimate: empty multiplicity vector");
  }
  int total = 0;
  for (int n : multiplicities) {
    if (n < 0) throw std::invalid_argument("collective_estimate: negative multiplicity");
    total += n;
  }
  if (total == 0) {
    throw std::invalid_argument("collective_estimate: multiplicities sum to zero");
  }
  const int d = static_cast<int>(multiplicities.size());
  RealMatrix density = RealMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    density(j, j) = static_cast<double>(multiplicities[static_cast<std::size_t>(j)]) /
                    static_cast<double>(total);
  }
  return CollectiveEstimate{std::move(density)};
}

ComplexMatrix sequence_operator(const ChainConfig& config, const std::vector<int>& outcomes) {
  if (static_cast<int>(outcomes.size()) != config.users()) {
    throw std::invalid_argument("sequence_operator: one outcome per user required");
  }
  for (int k : outcomes) {
    if (k < 0 || k >= config.dim()) {
      throw std::invalid_argument("sequence_operator: outcome index out of range");
    }
  }
  const std::vector<MeasurementModel> models = build_chain_models(config);
  const RealVector diag = sequence_diagonal(models, outcomes);
  ComplexMatrix op = ComplexMatrix::Zero(config.dim(), config.dim());
  for (int i = 0; i < config.dim(); ++i) {
    op(i, i) = Complex(diag(i), 0.0);
  }
  return op;
}

std::vector<OutcomeSequence> outcome_sequence_distribution(const ChainConfig& config,
                                                           const PureState& psi,
                                                           std::int64_t budget) {
  const int d = config.dim();
  if (psi.dim() != d) {
    throw std::invalid_argument("outcome_sequence_distribution: state dimension mismatch");
  }
  const std::int64_t count = sequence_count_or_throw(d, config.users(), budget);
  const std::vector<MeasurementModel> models = build_chain_models(config);

  RealVector weights(d);
  for (int i = 0; i < d; ++i) {
    weights(i) = std::norm(psi.amplitude(i));
  }

  std::vector<OutcomeSequence> result;
  result.reserve(static_cast<std::size_t>(count));
  for_each_sequence(d, config.users(), [&](const std::vector<int>& outcomes) {
    const RealVector diag = sequence_diagonal(models, outcomes);
    OutcomeSequence seq;
    seq.outcomes = outcomes;
    seq.probability = diag.array().square().matrix().dot(weights);
    seq.multiplicities.assign(static_cast<std::size_t>(d), 0);
    for (int k : outcomes) ++seq.multiplicities[static_cast<std::size_t>(k)];
    result.push_back(std::move(seq));
  });
  return result;
}

RealVector marginal_outcome_distribution(const ChainConfig& config, const PureState& psi,
                                         int user_index, std::int64_t budget) {
  if (user_index < 1 || user_index > config.users()) {
    throw std::invalid_argument("marginal_outcome_distribution: user index out of range");
  }
  const int d = config.dim();
  if (psi.dim() != d) {
    throw std::invalid_argument("marginal_outcome_distribution: state dimension mismatch");
  }
  sequence_count_or_throw(d, config.users(), budget);
  const std::vector<MeasurementModel> models = build_chain_models(config);

  RealVector weights(d);
  for (int i = 0; i < d; ++i) {
    weights(i) = std::norm(psi.amplitude(i));
  }

  RealVector marginal = RealVector::Zero(d);
  for_each_sequence(d, config.users(), [&](const std::vector<int>& outcomes) {
    const RealVector diag = sequence_diagonal(models, outcomes);
    marginal(outcomes[static_cast<std::size_t>(user_index - 1)]) +=
        diag.array().square().matrix().dot(weights);
  });
  return marginal;
}

double transmission_fidelity_chain(const ChainConfig& config, std::int64_t budget) {
  const int d = config.dim();
  sequence_count_or_throw(d, config.users(), budget);
  const std::vector<MeasurementModel> models = build_chain_models(config);

  double trace_sum = 0.0;
  for_each_sequence(d, config.users(), [&](const std::vector<int>& outcomes) {
    const double tr = sequence_diagonal(models, outcomes).sum();
    trace_sum += tr * tr;
  });

  const double dd = static_cast<double>(d);
  return (dd + trace_sum) / (dd * (dd + 1.0));
}

double transmission_fidelity_closed_form(int dim, double theta, int n_users) {
  check_user_count(n_users);
  const MeasurementModel model = build_model(ProbeConfig(dim, theta));
  const double matched = model.matched_amplitude();
  const double unmatched = model.unmatched_amplitude();

  double trace_sum = 0.0;
  for_each_composition(dim, n_users, [&](const std::vector<int>& counts, double coeff) {
    double tr = 0.0;
    for (int n : counts) {
      tr += std::pow(unmatched, n_users - n) * std::pow(matched, n);
    }
    trace_sum += coeff * tr * tr;
  });

  const double dd = static_cast<double>(dim);
  return (dd + trace_sum) / (dd * (dd + 1.0));
}

double estimation_fidelity_single_measure(int dim, double theta_last) {
  return average_fidelity_analytic(build_model(ProbeConfig(dim, theta_last))).estimation;
}

double estimation_fidelity_last_user_enumeration(const ChainConfig& config,
                                                 std::int64_t budget) {
  const int d = config.dim();
  sequence_count_or_throw(d, config.users(), budget);
  const std::vector<MeasurementModel> models = build_chain_models(config);

  double estimate_sum = 0.0;
  for_each_sequence(d, config.users(), [&](const std::vector<int>& outcomes) {
    const RealVector diag = sequence_diagonal(models, outcomes);
    const double entry = diag(outcomes.back());
    estimate_sum += entry * entry;
  });

  const double dd = static_cast<double>(d);
  return (dd + estimate_sum) / (dd * (dd + 1.0));
}

double estimation_fidelity_collective(int dim, double theta, int n_users, std::int64_t budget) {
  check_user_count(n_users);
  sequence_count_or_throw(dim, n_users, budget);
  const MeasurementModel model = build_model(ProbeConfig(dim, theta));
  const double matched = model.matched_amplitude();
  const double unmatched = model.unmatched_amplitude();
  const double n = static_cast<double>(n_users);

  double estimate_sum = 0.0;
  for_each_composition(dim, n_users, [&](const std::vector<int>& counts, double coeff) {
    double term = 0.0;
    for (int ni : counts) {
      const double diag = std::pow(unmatched, n_users - ni) * std::pow(matched, ni);
      term += (static_cast<double>(ni) / n) * diag * diag;
    }
    estimate_sum += coeff * term;
  });

  const double dd = static_cast<double>(dim);
  return (dd + estimate_sum) / (dd * (dd + 1.0));
}

double estimation_fidelity_collective_enumeration(int dim, double theta, int n_users,
                                                  std::int64_t budget) {
  check_user_count(n_users);
  sequence_count_or_throw(dim, n_users, budget);
  const ChainConfig config(dim, std::vector<double>(static_cast<std::size_t>(n_users), theta));
  const std::vector<MeasurementModel> models = build_chain_models(config);

  double estimate_sum = 0.0;
  for_each_sequence(dim, n_users, [&](const std::vector<int>& outcomes) {
    std::vector<int> multiplicities(static_cast<std::size_t>(dim), 0);
    for (int k : outcomes) ++multiplicities[static_cast<std::size_t>(k)];
    const RealMatrix rho = collective_estimate(multiplicities).density;
    const RealVector diag = sequence_diagonal(models, outcomes);
    for (int i = 0; i < dim; ++i) {
      estimate_sum += rho(i, i) * diag(i) * diag(i);
    }
  });

  const double dd = static_cast<double>(dim);
  return (dd + estimate_sum) / (dd * (dd + 1.0));
}

FidelityPoint two_user_fidelities(int dim, double theta_a, double theta_b) {
  const MeasurementModel first = build_model(ProbeConfig(dim, theta_a));
  const MeasurementModel second = build_model(ProbeConfig(dim, theta_b));

  std::vector<ComplexMatrix> products;
  products.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int ka = 0; ka < dim; ++ka) {
    for (int kb = 0; kb < dim; ++kb) {
      products.push_back(second.kraus(kb) * first.kraus(ka));
    }
  }

  double trace_sum = 0.0;
  for (const ComplexMatrix& p : products) {
    trace_sum += std::norm(p.trace());
  }

  const double dd = static_cast<double>(dim);
  FidelityPoint point;
  point.method = FidelityMethod::analytic;
  point.transmission = (dd + trace_sum) / (dd * (dd + 1.0));
  // Only the second user's outcome feeds the inference rule, so G is the
  // single-user value at theta_b.
  point.estimation = estimation_fidelity_single_measure(dim, theta_b);
  return point;
}

std::vector<TwoUserSample> two_user_region(int dim, int grid) {
  if (grid < 2) {
    throw std::invalid_argument("two_user_region: grid must be >= 2");
  }
  std::vector<TwoUserSample> samples;
  samples.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  auto grid_value = [&](int i) {
    return (i == grid - 1) ? kHalfPi : kHalfPi * static_cast<double>(i) / (grid - 1);
  };
  for (int ia = 0; ia < grid; ++ia) {
    for (int ib = 0; ib < grid; ++ib) {
      const double theta_a = grid_value(ia);
      const double theta_b = grid_value(ib);
      samples.push_back(TwoUserSample{theta_a, theta_b,
                                      two_user_fidelities(dim, theta_a, theta_b)});
    }
  }
  return samples;
}

ChainTrajectoryStats simulate_chain(const ChainConfig& config, std::int64_t n_signals,
                                    std::uint64_t rng_seed, int n_threads) {
  if (n_signals < 1) {
    throw std::invalid_argument("simulate_chain: n_signals must be >= 1");
  }
  const int d = config.dim();
  const int users = config.users();
  const std::vector<MeasurementModel> models = build_chain_models(config);

  struct Sums {
    double f = 0.0, f2 = 0.0, g = 0.0, g2 = 0.0;
    std::vector<std::int64_t> counts;  // users x d, row-major
  };
  constexpr std::int64_t kChunk = 4096;

  const std::vector<Sums> partials = detail::chunked_map<Sums>(
      n_signals, kChunk, n_threads,
      [&](std::int64_t /*chunk*/, std::int64_t begin, std::int64_t end) {
        Sums s;
        s.counts.assign(static_cast<std::size_t>(users) * static_cast<std::size_t>(d), 0);
        for (std::int64_t i = begin; i < end; ++i) {
          // One decorrelated stream per signal, so results do not depend on
          // how signals are grouped into chunks or threads.
          std::mt19937_64 rng(stream_seed(rng_seed, static_cast<std::uint64_t>(i)));
          const PureState input = haar_random_state(d, rng);
          PureState state = input;
          int last_outcome = 0;
          for (int u = 0; u < users; ++u) {
            SampledOutcome sampled = apply_and_sample(models[static_cast<std::size_t>(u)],
                                                      state, rng);
            state = std::move(sampled.state);
            last_outcome = sampled.outcome;
            ++s.counts[static_cast<std::size_t>(u) * static_cast<std::size_t>(d) +
                       static_cast<std::size_t>(sampled.outcome)];
          }
          const double f = std::norm(input.overlap(state));
          const double g = std::norm(input.amplitude(last_outcome));
          s.f += f;
          s.f2 += f * f;
          s.g += g;
          s.g2 += g * g;
        }
        return s;
      });

  Sums total;
  total.counts.assign(static_cast<std::size_t>(users) * static_cast<std::size_t>(d), 0);
  for (const Sums& s : partials) {
    total.f += s.f;
    total.f2 += s.f2;
    total.g += s.g;
    total.g2 += s.g2;
    for (std::size_t i = 0; i < total.counts.size(); ++i) total.counts[i] += s.counts[i];
  }

  const double n = static_cast<double>(n_signals);
  ChainTrajectoryStats stats;
  stats.n_signals = n_signals;
  stats.transmission = total.f / n;
  stats.estimation = total.g / n;
  if (n_signals > 1) {
    const double var_f =
        std::max(0.0, (total.f2 - n * stats.transmission * stats.transmission) / (n - 1.0));
    const double var_g =
        std::max(0.0, (total.g2 - n * stats.estimation * stats.estimation) / (n - 1.0));
    stats.transmission_stderr = std::sqrt(var_f / n);
    stats.estimation_stderr = std::sqrt(var_g / n);
  }
  stats.outcome_frequencies = RealMatrix::Zero(users, d);
  for (int u = 0; u < users; ++u) {
    for (int k = 0; k < d; ++k) {
      stats.outcome_frequencies(u, k) =
          static_cast<double>(total.counts[static_cast<std::size_t>(u) *
                                               static_cast<std::size_t>(d) +
                                           static_cast<std::size_t>(k)]) /
          n;
    }
  }
  return stats;
}

}  // namespace quid
