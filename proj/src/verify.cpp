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

#include "quid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "quid/cli.hpp"
#include "quid/fidelity.hpp"
#include "quid/linalg.hpp"
#include "quid/measurement.hpp"
#include "quid/sequential.hpp"

namespace quid {

namespace {

namespace fs = std::filesystem;

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<double> theta_grid(int n) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid.push_back(i == n - 1 ? kHalfPi : kHalfPi * static_cast<double>(i) / (n - 1));
  }
  return grid;
}

CheckResult at_most(std::string name, double measured, double threshold, std::string detail) {
  return CheckResult{std::move(name), measured <= threshold, measured, threshold,
                     std::move(detail)};
}

CheckResult at_least(std::string name, double measured, double threshold, std::string detail) {
  return CheckResult{std::move(name), measured >= threshold, measured, threshold,
                     std::move(detail)};
}

ComplexMatrix random_complex_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  return m;
}

// ---- linear algebra ----

CheckResult check_haar_norm(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    for (int s = 0; s < 24; ++s) {
      const PureState psi = haar_random_state(d, stream_seed(o.seed, 1000 + d * 100 + s));
      worst = std::max(worst, std::abs(psi.amplitudes().squaredNorm() - 1.0));
    }
  }
  return at_most("haar_norm", worst, 1e-12, "unit norm over d=2..8, 24 seeds each");
}

CheckResult check_haar_reproducible(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 5, 8}) {
    const PureState a = haar_random_state(d, stream_seed(o.seed, 2000 + d));
    const PureState b = haar_random_state(d, stream_seed(o.seed, 2000 + d));
    worst = std::max(worst, (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff());
  }
  return at_most("haar_reproducible", worst, 0.0, "identical draws for identical seeds");
}

CheckResult check_matmul_associativity(const VerifyOptions& o) {
  std::mt19937_64 rng(stream_seed(o.seed, 3000));
  std::uniform_int_distribution<int> dims(2, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int p = dims(rng), q = dims(rng), r = dims(rng), s = dims(rng);
    const ComplexMatrix a = random_complex_matrix(p, q, rng);
    const ComplexMatrix b = random_complex_matrix(q, r, rng);
    const ComplexMatrix c = random_complex_matrix(r, s, rng);
    const ComplexMatrix lhs = matmul(matmul(a, b), c);
    const ComplexMatrix rhs = matmul(a, matmul(b, c));
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return at_most("matmul_associativity", worst, 1e-10, "20 random triples");
}

// ---- measurement ----

CheckResult check_kraus_completeness(const VerifyOptions&) {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    for (double theta : theta_grid(50)) {
      const MeasurementModel model = build_model(ProbeConfig(d, theta));
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (const ComplexMatrix& a : model.kraus()) {
        sum += a.adjoint() * a;
      }
      worst = std::max(worst, (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
    }
  }
  return at_most("kraus_completeness", worst, 1e-12, "sum A^dag A = I, d=2..8 x 50 angles");
}

CheckResult check_gate_construction(const VerifyOptions& o) {
  std::mt19937_64 rng(stream_seed(o.seed, 4000));
  std::uniform_int_distribution<int> dims(2, 8);
  std::uniform_real_distribution<double> angles(0.0, kHalfPi);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const ProbeConfig config(dims(rng), angles(rng));
    const MeasurementModel direct = build_model(config);
    const MeasurementModel via_gate = build_model_from_gate(config);
    for (int k = 0; k < config.dim(); ++k) {
      worst = std::max(worst,
                       (direct.kraus(k) - via_gate.kraus(k)).cwiseAbs().maxCoeff());
    }
  }
  return at_most("gate_construction", worst, 1e-12,
                 "direct vs unitary-route operators, 40 random (d, theta)");
}

CheckResult check_kraus_commutation(const VerifyOptions&) {
  double worst = 0.0;
  for (int d : {2, 3, 4, 5}) {
    for (double theta : {0.4, 1.0}) {
      const MeasurementModel model = build_model(ProbeConfig(d, theta));
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          const ComplexMatrix commutator =
              model.kraus(i) * model.kraus(j) - model.kraus(j) * model.kraus(i);
          worst = std::max(worst, commutator.cwiseAbs().maxCoeff());
        }
      }
    }
  }
  return at_most("kraus_commutation", worst, 0.0, "[A_i, A_j] = 0 exactly");
}

CheckResult check_amplitude_order(const VerifyOptions&) {
  double worst = 1.0;
  for (int d = 2; d <= 8; ++d) {
    for (double theta : theta_grid(50)) {
      const MeasurementModel model = build_model(ProbeConfig(d, theta));
      worst = std::min(worst, model.matched_amplitude() - model.unmatched_amplitude());
      worst = std::min(worst, model.unmatched_amplitude());
    }
  }
  return at_least("amplitude_order", worst, 0.0, "L >= J >= 0 across the sweep");
}

// ---- fidelity ----

CheckResult check_route_agreement(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    std::vector<PureState> estimates;
    for (int k = 0; k < d; ++k) estimates.push_back(PureState::basis(d, k));
    for (double theta : theta_grid(50)) {
      const MeasurementModel model = build_model(ProbeConfig(d, theta));
      const FidelityPoint direct = average_fidelity_analytic(model);
      const FidelityPoint traced = average_fidelity_banaszek(model.kraus(), estimates);
      worst = std::max(worst, std::abs(direct.transmission - traced.transmission));
      worst = std::max(worst, std::abs(direct.estimation - traced.estimation));
    }
  }
  return at_most("route_agreement", worst, o.exact_tolerance,
                 "closed form vs trace formula, d=2..8 x 50 angles");
}

CheckResult check_monte_carlo_agreement(const VerifyOptions& o) {
  double worst = 0.0;
  std::uint64_t run = 0;
  for (int d : {2, 3, 4}) {
    for (double theta : {0.2, 0.7, 1.2}) {
      const MeasurementModel model = build_model(ProbeConfig(d, theta));
      const FidelityPoint exact = average_fidelity_analytic(model);
      const FidelityPoint mc =
          average_fidelity_monte_carlo(model, o.mc_samples, stream_seed(o.seed, 5000 + run++));
      worst = std::max(worst, std::abs(mc.transmission - exact.transmission) /
                                  mc.transmission_stderr);
      worst = std::max(worst,
                       std::abs(mc.estimation - exact.estimation) / mc.estimation_stderr);
    }
  }
  std::ostringstream detail;
  detail << "Monte Carlo vs analytic in stderr units, " << o.mc_samples
         << " samples, d={2,3,4} x 3 angles";
  return at_most("monte_carlo_agreement", worst, o.mc_sigma, detail.str());
}

CheckResult check_bound_saturation(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 3, 4, 8}) {
    for (double theta : theta_grid(50)) {
      const FidelityPoint point =
          average_fidelity_analytic(build_model(ProbeConfig(d, theta)));
      worst = std::max(worst, std::abs(bound_check(point, d).slack));
    }
  }
  return at_most("bound_saturation", worst, o.saturation_tolerance,
                 "max |slack| of analytic points, d={2,3,4,8} x 50 angles");
}

CheckResult check_bound_physicality(const VerifyOptions& o) {
  std::mt19937_64 rng(stream_seed(o.seed, 6000));
  std::normal_distribution<double> gauss(0.0, 1.0);
  double min_slack = 1.0;
  int strictly_inside = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    // A random valid diagonal measurement: nonnegative entries with every
    // column of the (outcome x index) amplitude table normalized.
    RealMatrix amps(d, d);
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j < d; ++j) {
        amps(k, j) = std::abs(gauss(rng)) + 0.05;
      }
    }
    for (int j = 0; j < d; ++j) {
      amps.col(j) /= amps.col(j).norm();
    }
    std::vector<ComplexMatrix> kraus;
    std::vector<PureState> estimates;
    for (int k = 0; k < d; ++k) {
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      for (int j = 0; j < d; ++j) a(j, j) = Complex(amps(k, j), 0.0);
      kraus.push_back(std::move(a));
      estimates.push_back(PureState::basis(d, k));
    }
    const FidelityPoint point = average_fidelity_banaszek(kraus, estimates);
    const double slack = bound_check(point, d).slack;
    min_slack = std::min(min_slack, slack);
    if (slack > 1e-9) ++strictly_inside;
  }
  std::ostringstream detail;
  detail << "min slack over 100 random diagonal measurements (" << strictly_inside
         << "/100 strictly inside)";
  return at_least("bound_physicality", min_slack, -1e-9, detail.str());
}

CheckResult check_fidelity_ranges(const VerifyOptions&) {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const double g_low = 1.0 / d, g_high = 2.0 / (d + 1.0);
    const double f_low = g_high, f_high = 1.0;
    for (double theta : theta_grid(50)) {
      const FidelityPoint p = average_fidelity_analytic(build_model(ProbeConfig(d, theta)));
      worst = std::max({worst, g_low - p.estimation, p.estimation - g_high,
                        f_low - p.transmission, p.transmission - f_high});
    }
  }
  return at_most("fidelity_ranges", worst, 1e-12,
                 "G in [1/d, 2/(d+1)], F in [2/(d+1), 1] on the optimal family");
}

// ---- sequential ----

CheckResult check_sequence_order_invariance(const VerifyOptions& o) {
  std::mt19937_64 rng(stream_seed(o.seed, 7000));
  std::uniform_real_distribution<double> angles(0.0, kHalfPi);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    const int users = 3 + trial % 3;
    std::vector<double> thetas;
    std::vector<int> outcomes;
    std::uniform_int_distribution<int> outcome_dist(0, d - 1);
    for (int u = 0; u < users; ++u) {
      thetas.push_back(angles(rng));
      outcomes.push_back(outcome_dist(rng));
    }
    const ComplexMatrix forward = sequence_operator(ChainConfig(d, thetas), outcomes);

    std::vector<std::size_t> perm(thetas.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> thetas_p;
    std::vector<int> outcomes_p;
    for (std::size_t i : perm) {
      thetas_p.push_back(thetas[i]);
      outcomes_p.push_back(outcomes[i]);
    }
    const ComplexMatrix shuffled = sequence_operator(ChainConfig(d, thetas_p), outcomes_p);
    worst = std::max(worst, (forward - shuffled).cwiseAbs().maxCoeff());
  }
  return at_most("sequence_order_invariance", worst, 1e-14,
                 "product operator under user permutations (round-off only)");
}

CheckResult check_estimation_n_independence(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int users = 1; users <= 4; ++users) {
      for (double theta : theta_grid(10)) {
        const ChainConfig config(d, std::vector<double>(static_cast<std::size_t>(users), theta));
        const double enumerated = estimation_fidelity_last_user_enumeration(config);
        const double analytic = estimation_fidelity_single_measure(d, theta);
        worst = std::max(worst, std::abs(enumerated - analytic));
      }
    }
  }
  return at_most("estimation_n_independence", worst, o.enumeration_tolerance,
                 "last-user G by enumeration vs single-user value, d={2,3,4}, N<=4");
}

CheckResult check_collective_equals_single(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int users = 1; users <= 4; ++users) {
      for (double theta : theta_grid(10)) {
        const double collective = estimation_fidelity_collective(d, theta, users);
        const double single = estimation_fidelity_single_measure(d, theta);
        worst = std::max(worst, std::abs(collective - single));
      }
    }
  }
  return at_most("collective_equals_single", worst, o.enumeration_tolerance,
                 "frequency-based collective G vs single-measure G, d={2,3,4}, N<=4");
}

CheckResult check_collective_fast_path(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int users : {2, 4}) {
      for (double theta : theta_grid(6)) {
        const double fast = estimation_fidelity_collective(d, theta, users);
        const double raw = estimation_fidelity_collective_enumeration(d, theta, users);
        worst = std::max(worst, std::abs(fast - raw));
      }
    }
  }
  return at_most("collective_fast_path", worst, o.exact_tolerance,
                 "multiplicity aggregation vs raw sequence sum");
}

CheckResult check_transmission_monotone(const VerifyOptions&) {
  double worst = -1.0;
  for (int d : {2, 3, 4}) {
    for (double theta : {0.3, 0.7, 1.1, 1.4}) {
      double previous = transmission_fidelity_closed_form(d, theta, 1);
      for (int users = 2; users <= 6; ++users) {
        const double current = transmission_fidelity_closed_form(d, theta, users);
        worst = std::max(worst, current - previous);
        previous = current;
      }
    }
  }
  return CheckResult{"transmission_monotone", worst < 0.0, worst, 0.0,
                     "F_N strictly decreasing in N for interior angles"};
}

CheckResult check_closed_form_equals_enumeration(const VerifyOptions& o) {
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int users = 1; users <= 5; ++users) {
      for (double theta : theta_grid(10)) {
        const ChainConfig config(d, std::vector<double>(static_cast<std::size_t>(users), theta));
        const double enumerated = transmission_fidelity_chain(config);
        const double closed = transmission_fidelity_closed_form(d, theta, users);
        worst = std::max(worst, std::abs(enumerated - closed));
      }
    }
  }
  return at_most("closed_form_equals_enumeration", worst, o.enumeration_tolerance,
                 "multinomial F_N vs raw enumeration, d={2,3,4}, N<=5");
}

CheckResult check_two_user_special_case(const VerifyOptions& o) {
  double worst = 0.0;
  for (double theta_a : theta_grid(20)) {
    const double expected = (5.0 - std::cos(2.0 * theta_a)) / 6.0;
    const double actual = two_user_fidelities(2, theta_a, kHalfPi).transmission;
    worst = std::max(worst, std::abs(actual - expected));
  }
  return at_most("two_user_special_case", worst, o.exact_tolerance,
                 "F2(theta_a, pi/2) = (5 - cos 2 theta_a)/6");
}

CheckResult check_two_user_blind_slice(const VerifyOptions& o) {
  double worst = 0.0;
  for (double theta_b : theta_grid(25)) {
    const FidelityPoint point = two_user_fidelities(2, kHalfPi, theta_b);
    worst = std::max(worst, std::abs(bound_check(point, 2).slack));
  }
  return at_most("two_user_blind_slice", worst, o.saturation_tolerance,
                 "theta_a = pi/2 slice saturates the bound");
}

CheckResult check_two_user_homogeneous(const VerifyOptions& o) {
  double worst = 0.0;
  for (double theta : theta_grid(20)) {
    const double from_products = two_user_fidelities(2, theta, theta).transmission;
    const double from_closed_form = transmission_fidelity_closed_form(2, theta, 2);
    worst = std::max(worst, std::abs(from_products - from_closed_form));
  }
  return at_most("two_user_homogeneous", worst, o.exact_tolerance,
                 "theta_a = theta_b reduces to the homogeneous N=2 curve");
}

CheckResult check_two_user_region_bound(const VerifyOptions&) {
  double min_slack = 1.0;
  for (const TwoUserSample& sample : two_user_region(2, 21)) {
    min_slack = std::min(min_slack, bound_check(sample.point, 2).slack);
  }
  return at_least("two_user_region_bound", min_slack, -1e-9,
                  "min slack over the 21 x 21 (theta_a, theta_b) grid");
}

// ---- command-line outputs ----

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CheckResult check_cli_determinism(const VerifyOptions& o) {
  const fs::path dir = fs::temp_directory_path();
  const std::string tag = std::to_string(stream_seed(o.seed, 8000));
  const fs::path first = dir / ("quid_verify_" + tag + "_a.csv");
  const fs::path second = dir / ("quid_verify_" + tag + "_b.csv");

  cli::RunConfig config;
  config.dim = 3;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 33};
  config.output_path = first.string();
  cli::run_tradeoff(config);
  config.output_path = second.string();
  cli::run_tradeoff(config);

  const bool identical = read_file(first) == read_file(second);
  fs::remove(first);
  fs::remove(second);
  return CheckResult{"cli_determinism", identical, identical ? 0.0 : 1.0, 0.0,
                     "re-running one config yields byte-identical output"};
}

CheckResult check_cli_single_user_reduction(const VerifyOptions& o) {
  const fs::path dir = fs::temp_directory_path();
  const std::string tag = std::to_string(stream_seed(o.seed, 9000));
  const fs::path tradeoff_path = dir / ("quid_verify_" + tag + "_t.csv");
  const fs::path sequential_path = dir / ("quid_verify_" + tag + "_s.csv");

  cli::RunConfig config;
  config.dim = 2;
  config.theta = cli::SweepSpec{0.0, kHalfPi, 17};
  config.output_path = tradeoff_path.string();
  cli::run_tradeoff(config);
  config.n_users = 1;
  config.output_path = sequential_path.string();
  cli::run_sequential(config);

  auto split_lines = [](const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
  };
  auto fields = [](const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
  };

  const std::vector<std::string> tradeoff_lines = split_lines(read_file(tradeoff_path));
  const std::vector<std::string> sequential_lines = split_lines(read_file(sequential_path));
  fs::remove(tradeoff_path);
  fs::remove(sequential_path);

  int mismatches = 0;
  if (tradeoff_lines.size() != sequential_lines.size()) {
    mismatches = 1000;
  } else {
    for (std::size_t i = 1; i < tradeoff_lines.size(); ++i) {
      const auto a = fields(tradeoff_lines[i]);
      const auto b = fields(sequential_lines[i]);
      // theta, G, F must agree as strings (columns 0..2 of both layouts).
      if (a.size() < 3 || b.size() < 3 || a[0] != b[0] || a[1] != b[1] || a[2] != b[2]) {
        ++mismatches;
      }
    }
  }
  return CheckResult{"cli_single_user_reduction", mismatches == 0,
                     static_cast<double>(mismatches), 0.0,
                     "sequential with N=1 emits the tradeoff (G, F) columns verbatim"};
}

}  // namespace

std::vector<CheckResult> run_all_checks(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_haar_norm(options));
  results.push_back(check_haar_reproducible(options));
  results.push_back(check_matmul_associativity(options));
  results.push_back(check_kraus_completeness(options));
  results.push_back(check_gate_construction(options));
  results.push_back(check_kraus_commutation(options));
  results.push_back(check_amplitude_order(options));
  results.push_back(check_route_agreement(options));
  results.push_back(check_monte_carlo_agreement(options));
  results.push_back(check_bound_saturation(options));
  results.push_back(check_bound_physicality(options));
  results.push_back(check_fidelity_ranges(options));
  results.push_back(check_sequence_order_invariance(options));
  results.push_back(check_estimation_n_independence(options));
  results.push_back(check_collective_equals_single(options));
  results.push_back(check_collective_fast_path(options));
  results.push_back(check_transmission_monotone(options));
  results.push_back(check_closed_form_equals_enumeration(options));
  results.push_back(check_two_user_special_case(options));
  results.push_back(check_two_user_blind_slice(options));
  results.push_back(check_two_user_homogeneous(options));
  results.push_back(check_two_user_region_bound(options));
  results.push_back(check_cli_determinism(options));
  results.push_back(check_cli_single_user_reduction(options));
  return results;
}

int print_report(std::ostream& out, const std::vector<CheckResult>& results) {
  int failures = 0;
  for (const CheckResult& r : results) {
    if (!r.passed) ++failures;
    char measured[32], threshold[32];
    std::snprintf(measured, sizeof(measured), "%.3g", r.measured);
    std::snprintf(threshold, sizeof(threshold), "%.3g", r.threshold);
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
    for (std::size_t i = r.name.size(); i < 32; ++i) out << ' ';
    out << " measured=" << measured << " limit=" << threshold << "  " << r.detail << '\n';
  }
  out << results.size() << " checks, " << failures << " failure" << (failures == 1 ? "" : "s")
      << '\n';
  return failures;
}

}  // namespace quid
