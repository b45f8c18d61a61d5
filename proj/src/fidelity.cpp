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

#include "quid/fidelity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chunked_reduce.hpp"

namespace quid {

namespace {

constexpr double kCompletenessTolerance = 1e-9;

int validated_square_dim(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) {
    throw std::invalid_argument("average_fidelity_banaszek: empty operator set");
  }
  const int d = static_cast<int>(kraus.front().rows());
  for (const ComplexMatrix& a : kraus) {
    if (a.rows() != d || a.cols() != d) {
      throw std::invalid_argument("average_fidelity_banaszek: operators must be square "
                                  "and share one dimension");
    }
  }
  return d;
}

void require_complete(const std::vector<ComplexMatrix>& kraus, int d) {
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& a : kraus) {
    sum += a.adjoint() * a;
  }
  const double deviation = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (deviation > kCompletenessTolerance) {
    throw std::invalid_argument("average_fidelity_banaszek: operator set is not complete, "
                                "max |sum A^dag A - I| = " + std::to_string(deviation));
  }
}

double transmission_term(const std::vector<ComplexMatrix>& kraus) {
  double sum = 0.0;
  for (const ComplexMatrix& a : kraus) {
    sum += std::norm(a.trace());
  }
  return sum;
}

}  // namespace

StateFidelity fidelity_per_state(const MeasurementModel& model, const PureState& psi) {
  const int d = model.dim();
  if (psi.dim() != d) {
    throw std::invalid_argument("fidelity_per_state: state dimension mismatch");
  }
  const double matched = model.matched_amplitude();
  const double unmatched = model.unmatched_amplitude();
  const double l2 = matched * matched;
  const double j2 = unmatched * unmatched;

  StateFidelity result;
  for (int k = 0; k < d; ++k) {
    const double pk = std::norm(psi.amplitude(k));
    // <psi|A_k|psi> = J + (L - J)|psi_k|^2; real since A_k is real diagonal.
    const double amp = unmatched + (matched - unmatched) * pk;
    result.transmission += amp * amp;
    const double prob = j2 * (1.0 - pk) + l2 * pk;
    result.estimation += prob * pk;
  }
  return result;
}

FidelityPoint average_fidelity_analytic(const MeasurementModel& model) {
  const double d = static_cast<double>(model.dim());
  const double matched = model.matched_amplitude();
  const double unmatched = model.unmatched_amplitude();
  const double trace_amp = matched + (d - 1.0) * unmatched;

  FidelityPoint point;
  point.method = FidelityMethod::analytic;
  point.transmission = (1.0 + trace_amp * trace_amp) / (d + 1.0);
  point.estimation = (1.0 + matched * matched) / (d + 1.0);
  return point;
}

FidelityPoint average_fidelity_banaszek(const std::vector<ComplexMatrix>& kraus,
                                        const std::vector<PureState>& estimates) {
  const int d = validated_square_dim(kraus);
  if (estimates.size() != kraus.size()) {
    throw std::invalid_argument("average_fidelity_banaszek: one estimate per operator required");
  }
  require_complete(kraus, d);

  double estimation_sum = 0.0;
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    if (estimates[k].dim() != d) {
      throw std::invalid_argument("average_fidelity_banaszek: estimate dimension mismatch");
    }
    const ComplexVector projected = kraus[k] * estimates[k].amplitudes();
    estimation_sum += projected.squaredNorm();  // <phi|A^dag A|phi>
  }

  const double dd = static_cast<double>(d);
  FidelityPoint point;
  point.method = FidelityMethod::analytic;
  point.transmission = (dd + transmission_term(kraus)) / (dd * (dd + 1.0));
  point.estimation = (dd + estimation_sum) / (dd * (dd + 1.0));
  return point;
}

FidelityPoint average_fidelity_banaszek(const std::vector<ComplexMatrix>& kraus,
                                        const std::vector<RealMatrix>& estimate_densities) {
  const int d = validated_square_dim(kraus);
  if (estimate_densities.size() != kraus.size()) {
    throw std::invalid_argument("average_fidelity_banaszek: one estimate per operator required");
  }
  require_complete(kraus, d);

  double estimation_sum = 0.0;
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    const RealMatrix& rho = estimate_densities[k];
    if (rho.rows() != d || rho.cols() != d) {
      throw std::invalid_argument("average_fidelity_banaszek: estimate dimension mismatch");
    }
    const ComplexMatrix povm = kraus[k].adjoint() * kraus[k];
    estimation_sum += (rho.cast<Complex>() * povm).trace().real();
  }

  const double dd = static_cast<double>(d);
  FidelityPoint point;
  point.method = FidelityMethod::analytic;
  point.transmission = (dd + transmission_term(kraus)) / (dd * (dd + 1.0));
  point.estimation = (dd + estimation_sum) / (dd * (dd + 1.0));
  return point;
}

FidelityPoint average_fidelity_monte_carlo(const MeasurementModel& model,
                                           std::int64_t n_samples, std::uint64_t rng_seed,
                                           int n_threads) {
  if (n_samples < 1) {
    throw std::invalid_argument("average_fidelity_monte_carlo: n_samples must be >= 1");
  }

  struct Sums {
    double f = 0.0, f2 = 0.0, g = 0.0, g2 = 0.0;
  };
  constexpr std::int64_t kChunk = 8192;
  const int d = model.dim();

  const std::vector<Sums> partials = detail::chunked_map<Sums>(
      n_samples, kChunk, n_threads,
      [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        std::mt19937_64 rng(stream_seed(rng_seed, static_cast<std::uint64_t>(chunk)));
        Sums s;
        for (std::int64_t i = begin; i < end; ++i) {
          const PureState psi = haar_random_state(d, rng);
          const StateFidelity sf = fidelity_per_state(model, psi);
          s.f += sf.transmission;
          s.f2 += sf.transmission * sf.transmission;
          s.g += sf.estimation;
          s.g2 += sf.estimation * sf.estimation;
        }
        return s;
      });

  // Fixed-order reduction keeps the result independent of thread count.
  Sums total;
  for (const Sums& s : partials) {
    total.f += s.f;
    total.f2 += s.f2;
    total.g += s.g;
    total.g2 += s.g2;
  }

  const double n = static_cast<double>(n_samples);
  FidelityPoint point;
  point.method = FidelityMethod::monte_carlo;
  point.transmission = total.f / n;
  point.estimation = total.g / n;
  if (n_samples > 1) {
    const double var_f =
        std::max(0.0, (total.f2 - n * point.transmission * point.transmission) / (n - 1.0));
    const double var_g =
        std::max(0.0, (total.g2 - n * point.estimation * point.estimation) / (n - 1.0));
    point.transmission_stderr = std::sqrt(var_f / n);
    point.estimation_stderr = std::sqrt(var_g / n);
  }
  return point;
}

BoundReport bound_check(const FidelityPoint& point, int dim, double tolerance) {
  if (dim < 2) {
    throw std::invalid_argument("bound_check: dim must be >= 2");
  }
  const double d = static_cast<double>(dim);
  const double f0 = 0.5 * (d + 2.0) / (d + 1.0);
  const double g0 = 0.5 * 3.0 / (d + 1.0);
  const double df = point.transmission - f0;
  const double dg = point.estimation - g0;

  BoundReport report;
  report.lhs = df * df + d * d * dg * dg + 2.0 * (d - 2.0) * df * dg;
  report.rhs = (d - 1.0) / ((d + 1.0) * (d + 1.0));
  report.slack = report.rhs - report.lhs;
  report.saturated = std::abs(report.slack) <= tolerance;
  return report;
}

std::vector<CurveSample> tradeoff_curve(int dim, int n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("tradeoff_curve: n_points must be >= 2");
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  std::vector<CurveSample> curve;
  curve.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta =
        (i == n_points - 1) ? kHalfPi : kHalfPi * static_cast<double>(i) / (n_points - 1);
    const MeasurementModel model = build_model(ProbeConfig(dim, theta));
    curve.push_back(CurveSample{theta, average_fidelity_analytic(model)});
  }
  return curve;
}

}  // namespace quid
