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

#include "quid/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quid {

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw std::invalid_argument("PureState: amplitude vector must be non-empty");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("PureState: squared norm deviates from 1 by " +
                                std::to_string(norm2 - 1.0));
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 1e-150)) {
    throw std::invalid_argument("PureState::normalized: vector norm is (near) zero");
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) {
    throw std::invalid_argument("PureState::basis: index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = Complex(1.0, 0.0);
  return PureState(std::move(v));
}

Complex PureState::overlap(const PureState& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("PureState::overlap: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
  return a * b;
}

Complex trace(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("trace: matrix is not square");
  }
  return a.trace();
}

PureState haar_random_state(int dim, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return haar_random_state(dim, rng);
}

PureState haar_random_state(int dim, std::mt19937_64& rng) {
  if (dim < 2) {
    throw std::invalid_argument("haar_random_state: dim must be >= 2");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v(i) = Complex(re, im);
    }
    norm2 = v.squaredNorm();
  } while (!(norm2 > 1e-300));
  return PureState::normalized(std::move(v));
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 of (seed, index); full 64-bit diffusion keeps nearby indices
  // statistically independent.
  std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace quid
