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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace quid {

using Complex = std::complex<double>;

// Dense dynamic-size types. Eigen does all the heavy lifting; these aliases
// keep signatures short and let the scalar type vary where useful.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;
using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;

/// Maximum allowed deviation of a pure state's squared norm from 1.
inline constexpr double kNormTolerance = 1e-12;

/// A unit-norm complex amplitude vector over the computational basis.
///
/// The global phase is not canonicalized; every quantity derived from a
/// PureState in this library is phase-invariant.
class PureState {
 public:
  /// Wraps `amplitudes`, rejecting vectors whose squared norm deviates from
  /// 1 by more than kNormTolerance.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales `amplitudes` to unit norm. Throws if the vector is (near) zero.
  static PureState normalized(ComplexVector amplitudes);

  /// The computational basis state |k>.
  static PureState basis(int dim, int k);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i) const { return amplitudes_(i); }

  /// <this|other>.
  Complex overlap(const PureState& other) const;

 private:
  ComplexVector amplitudes_;
};

/// Matrix product with explicit shape validation.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum of diagonal entries. Rejects non-square input.
Complex trace(const ComplexMatrix& a);

/// A pure state distributed by the unitarily invariant (Haar) measure,
/// obtained by normalizing a vector of iid standard complex Gaussians.
/// Deterministic for a fixed seed. Requires dim >= 2.
PureState haar_random_state(int dim, std::uint64_t rng_seed);

/// Same distribution, drawing from a caller-owned generator.
PureState haar_random_state(int dim, std::mt19937_64& rng);

/// Decorrelated child seed for worker or sample stream `index`, so that
/// parallel Monte Carlo runs are reproducible independent of scheduling.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace quid
