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

#include "quid/measurement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace quid {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kModelTolerance = 1e-12;

// The two diagonal amplitudes (matched L, unmatched J). Shared by
// probe_state and build_model so both routes use identical arithmetic.
std::pair<double, double> diagonal_amplitudes(const ProbeConfig& config) {
  const double gamma = probe_normalization(config);
  const double unmatched =
      gamma * std::sin(config.theta()) / std::sqrt(static_cast<double>(config.dim()));
  const double matched = std::cos(config.theta()) + unmatched;
  return {matched, unmatched};
}

}  // namespace

ProbeConfig::ProbeConfig(int dim, double theta) : dim_(dim), theta_(theta) {
  if (dim < 2) {
    throw std::invalid_argument("ProbeConfig: dim must be >= 2, got " + std::to_string(dim));
  }
  if (!(theta >= 0.0 && theta <= kHalfPi)) {
    throw std::invalid_argument("ProbeConfig: theta must lie in [0, pi/2], got " +
                                std::to_string(theta));
  }
}

double probe_normalization(const ProbeConfig& config) {
  const double theta = config.theta();
  // Continuous limits at the endpoints, where the defining expression is
  // 0/0 respectively inf/inf.
  if (theta == 0.0) return 0.0;
  if (theta >= kHalfPi) return 1.0;
  const double t = std::tan(theta);
  const double d = static_cast<double>(config.dim());
  return (std::sqrt(1.0 + d * t * t) - 1.0) / (std::sqrt(d) * t);
}

PureState probe_state(const ProbeConfig& config) {
  const auto [matched, unmatched] = diagonal_amplitudes(config);
  ComplexVector amps = ComplexVector::Constant(config.dim(), Complex(unmatched, 0.0));
  amps(0) = Complex(matched, 0.0);
  return PureState(std::move(amps));
}

ComplexMatrix controlled_shift_gate(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("controlled_shift_gate: dim must be >= 2");
  }
  const int n = dim * dim;
  ComplexMatrix gate = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < dim; ++i) {
    for (int s = 0; s < dim; ++s) {
      gate(i * dim + (i + s) % dim, i * dim + s) = Complex(1.0, 0.0);
    }
  }
  return gate;
}

MeasurementModel::MeasurementModel(const ProbeConfig& config, double matched, double unmatched)
    : config_(config), matched_(matched), unmatched_(unmatched) {
  const int d = config_.dim();
  kraus_.reserve(d);
  for (int k = 0; k < d; ++k) {
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      a(j, j) = Complex(j == k ? matched_ : unmatched_, 0.0);
    }
    kraus_.push_back(std::move(a));
  }
  validate();
}

MeasurementModel::MeasurementModel(const ProbeConfig& config, std::vector<ComplexMatrix> kraus)
    : config_(config), matched_(0.0), unmatched_(0.0), kraus_(std::move(kraus)) {
  const int d = config_.dim();
  if (static_cast<int>(kraus_.size()) != d) {
    throw std::invalid_argument("MeasurementModel: expected one operator per outcome");
  }
  for (int k = 0; k < d; ++k) {
    const ComplexMatrix& a = kraus_[k];
    if (a.rows() != d || a.cols() != d) {
      throw std::invalid_argument("MeasurementModel: operator has wrong shape");
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j && std::abs(a(i, j)) > kModelTolerance) {
          throw std::invalid_argument("MeasurementModel: operator is not diagonal");
        }
        if (std::abs(a(i, j).imag()) > kModelTolerance) {
          throw std::invalid_argument("MeasurementModel: operator is not real");
        }
      }
    }
  }
  matched_ = kraus_[0](0, 0).real();
  unmatched_ = d > 1 ? kraus_[0](1, 1).real() : matched_;
  validate();
}

void MeasurementModel::validate() const {
  const int d = config_.dim();
  // Every operator carries the matched amplitude at its own index and the
  // unmatched amplitude elsewhere.
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      const double want = (j == k) ? matched_ : unmatched_;
      if (std::abs(kraus_[k](j, j).real() - want) > kModelTolerance) {
        throw std::invalid_argument("MeasurementModel: diagonal entries are inconsistent");
      }
    }
  }
  const double completeness = matched_ * matched_ + (d - 1) * unmatched_ * unmatched_;
  if (std::abs(completeness - 1.0) > kModelTolerance) {
    throw std::invalid_argument("MeasurementModel: operators are not trace preserving, "
                                "sum_k A_k^dag A_k deviates from I by " +
                                std::to_string(completeness - 1.0));
  }
  if (std::abs((matched_ - unmatched_) - std::cos(config_.theta())) > kModelTolerance) {
    throw std::invalid_argument("MeasurementModel: L - J != cos(theta)");
  }
}

const ComplexMatrix& MeasurementModel::kraus(int k) const {
  if (k < 0 || k >= dim()) {
    throw std::invalid_argument("MeasurementModel::kraus: outcome index out of range");
  }
  return kraus_[k];
}

ComplexMatrix MeasurementModel::povm_element(int k) const {
  const ComplexMatrix& a = kraus(k);
  return a.adjoint() * a;
}

double MeasurementModel::outcome_probability(int k, const PureState& psi) const {
  if (psi.dim() != dim()) {
    throw std::invalid_argument("MeasurementModel: state dimension mismatch");
  }
  if (k < 0 || k >= dim()) {
    throw std::invalid_argument("MeasurementModel: outcome index out of range");
  }
  const double l2 = matched_ * matched_;
  const double j2 = unmatched_ * unmatched_;
  const double pk = std::norm(psi.amplitude(k));
  return j2 * (1.0 - pk) + l2 * pk;
}

MeasurementModel build_model(const ProbeConfig& config) {
  const auto [matched, unmatched] = diagonal_amplitudes(config);
  return MeasurementModel(config, matched, unmatched);
}

MeasurementModel build_model_from_gate(const ProbeConfig& config) {
  const int d = config.dim();
  const ComplexMatrix gate = controlled_shift_gate(d);
  const ComplexVector omega = probe_state(config).amplitudes();

  // I (x) |omega>: maps |j> to |j>|omega>.
  ComplexMatrix embed = ComplexMatrix::Zero(d * d, d);
  for (int j = 0; j < d; ++j) {
    for (int s = 0; s < d; ++s) {
      embed(j * d + s, j) = omega(s);
    }
  }
  const ComplexMatrix coupled = gate * embed;  // d^2 x d

  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d);
  for (int k = 0; k < d; ++k) {
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        a(i, j) = coupled(i * d + k, j);
      }
    }
    kraus.push_back(std::move(a));
  }
  return MeasurementModel(config, std::move(kraus));
}

SampledOutcome apply_and_sample(const MeasurementModel& model, const PureState& psi,
                                std::mt19937_64& rng) {
  const int d = model.dim();
  if (psi.dim() != d) {
    throw std::invalid_argument("apply_and_sample: state dimension mismatch");
  }

  RealVector probs(d);
  double total = 0.0;
  double max_prob = 0.0;
  for (int k = 0; k < d; ++k) {
    probs(k) = model.outcome_probability(k, psi);
    total += probs(k);
    max_prob = std::max(max_prob, probs(k));
  }
  if (max_prob < 1e-300) {
    throw std::domain_error("apply_and_sample: state has no support on any outcome");
  }

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng) * total;
  int outcome = -1;
  double cumulative = 0.0;
  for (int k = 0; k < d; ++k) {
    cumulative += probs(k);
    // Strict comparison: a zero-probability branch never advances the
    // cumulative sum, so it can never be selected.
    if (u < cumulative && probs(k) > 0.0) {
      outcome = k;
      break;
    }
  }
  if (outcome < 0) {
    for (int k = d - 1; k >= 0; --k) {
      if (probs(k) > 0.0) {
        outcome = k;
        break;
      }
    }
  }

  const double matched = model.matched_amplitude();
  const double unmatched = model.unmatched_amplitude();
  ComplexVector post = unmatched * psi.amplitudes();
  post(outcome) += (matched - unmatched) * psi.amplitude(outcome);
  return SampledOutcome{outcome, PureState::normalized(std::move(post)), probs(outcome)};
}

SampledOutcome apply_and_sample(const MeasurementModel& model, const PureState& psi,
                                std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return apply_and_sample(model, psi, rng);
}

}  // namespace quid
