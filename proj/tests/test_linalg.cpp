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

#include <doctest.h>

#include <cmath>
#include <random>

#include "quid/linalg.hpp"
#include "quid/measurement.hpp"
#include "support.hpp"

using namespace quid;

TEST_CASE("PureState enforces unit norm") {
  ComplexVector v(2);
  v << Complex(1.0, 0.0), Complex(1.0, 0.0);
  CHECK_THROWS_AS(PureState{v}, std::invalid_argument);

  const PureState psi = PureState::normalized(v);
  CHECK(psi.amplitudes().squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi.amplitude(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  CHECK_THROWS_AS(PureState::normalized(ComplexVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("basis states") {
  const PureState e1 = PureState::basis(3, 1);
  CHECK(e1.dim() == 3);
  CHECK(e1.amplitude(1) == Complex(1.0, 0.0));
  CHECK(e1.amplitude(0) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(PureState::basis(3, 3), std::invalid_argument);
}

TEST_CASE("matmul identity and diagonal products") {
  ComplexMatrix m(2, 2);
  m << Complex(1.0, 2.0), Complex(0.5, 0.0), Complex(0.0, -1.0), Complex(3.0, 0.25);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  CHECK((matmul(id, m) - m).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  b(0, 0) = 5.0;
  b(1, 1) = 7.0;
  const ComplexMatrix ab = matmul(a, b);
  CHECK(ab(0, 0) == Complex(10.0, 0.0));
  CHECK(ab(1, 1) == Complex(21.0, 0.0));
  CHECK(ab(0, 1) == Complex(0.0, 0.0));

  CHECK_THROWS_AS(matmul(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("product of adjacent-outcome operators is proportional to identity") {
  // For d = 2 both diagonal entries of A_0 A_1 equal L * J.
  const MeasurementModel model = build_model(ProbeConfig(2, 0.8));
  const ComplexMatrix product = matmul(model.kraus(0), model.kraus(1));
  const double lj = model.matched_amplitude() * model.unmatched_amplitude();
  CHECK(product(0, 0).real() == doctest::Approx(lj).epsilon(1e-15));
  CHECK(product(1, 1).real() == doctest::Approx(lj).epsilon(1e-15));
  CHECK(std::abs(product(0, 1)) == 0.0);
}

TEST_CASE("trace") {
  CHECK(trace(ComplexMatrix::Identity(5, 5)) == Complex(5.0, 0.0));
  CHECK(trace(ComplexMatrix::Zero(3, 3)) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(trace(ComplexMatrix::Zero(2, 3)), std::invalid_argument);

  // tr A_k = L + (d-1) J for every outcome.
  for (int d : {2, 3, 5}) {
    const MeasurementModel model = build_model(ProbeConfig(d, 0.6));
    const double expected =
        model.matched_amplitude() + (d - 1) * model.unmatched_amplitude();
    for (int k = 0; k < d; ++k) {
      CHECK(trace(model.kraus(k)).real() == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("matmul associativity on random triples") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + trial % 4;
    auto rand_matrix = [&](int rows, int cols) {
      ComplexMatrix m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
      return m;
    };
    const ComplexMatrix a = rand_matrix(d, d + 1);
    const ComplexMatrix b = rand_matrix(d + 1, d);
    const ComplexMatrix c = rand_matrix(d, d + 2);
    CHECK((matmul(matmul(a, b), c) - matmul(a, matmul(b, c))).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("haar_random_state norms, reproducibility, rejection") {
  for (int d = 2; d <= 8; ++d) {
    for (std::uint64_t seed : {1ULL, 77ULL, 123456ULL}) {
      const PureState psi = haar_random_state(d, seed);
      CHECK(std::abs(psi.amplitudes().squaredNorm() - 1.0) <= 1e-12);
    }
  }
  const PureState a = haar_random_state(4, 2024);
  const PureState b = haar_random_state(4, 2024);
  CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(haar_random_state(1, 5), std::invalid_argument);
}

TEST_CASE("haar_random_state moments match the invariant measure") {
  // <|psi_0|^2> = 1/d and <|psi_0|^4> = 2/(d(d+1)); for d = 2 these are
  // 1/2 and 1/3.
  constexpr int kSamples = 1000000;
  std::mt19937_64 rng(31415);
  double second = 0.0;
  double fourth = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const PureState psi = haar_random_state(2, rng);
    const double p = std::norm(psi.amplitude(0));
    second += p;
    fourth += p * p;
  }
  second /= kSamples;
  fourth /= kSamples;
  CHECK(std::abs(second - 0.5) < 0.002);
  CHECK(std::abs(fourth - 1.0 / 3.0) < 0.002);
}

TEST_CASE("stream_seed decorrelates nearby indices") {
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
  CHECK(stream_seed(7, 3) == stream_seed(7, 3));
}
