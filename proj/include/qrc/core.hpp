// Copyright 2026 The QRC Memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qrc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Single-qubit operator labels. Basis convention: |0> is the +1 eigenstate
/// of sigma_z (the excited level) and sigma_minus = |1><0| lowers it, so
/// amplitude damping relaxes every qubit towards |1>.
enum class Axis { kX, kY, kZ, kPlus, kMinus };

ComplexMatrix pauli(Axis axis);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I x ... x sigma^axis x ... x I with the operator on `site`; site 0 is the
/// leftmost (most significant) tensor factor.
ComplexMatrix pauli_site(Axis axis, std::size_t site, std::size_t n_qubits);

/// exp(a) by scaling and squaring around a truncated Taylor kernel evaluated
/// with the Paterson-Stockmeyer scheme. The scaled matrix satisfies
/// ||a / 2^s||_1 <= 0.5; the Taylor degree is the smallest one whose
/// remainder bound is below 1e-3 * tol.
ComplexMatrix matrix_exp(const ComplexMatrix& a, double tol = 1e-12);

double norm1(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);

/// Hermitian, unit-trace, numerically positive semidefinite matrix.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = 1e-8;

  DensityMatrix() = default;

  /// Validates against the tolerances above (or the supplied ones) and
  /// throws on violation.
  explicit DensityMatrix(ComplexMatrix m, double hermitian_tol = kHermitianTol,
                         double trace_tol = kTraceTol, double psd_tol = kPsdTol);

  /// Takes ownership without validation. Callers promise the invariants.
  static DensityMatrix unchecked(ComplexMatrix m);

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  double min_eigenvalue() const;

 private:
  ComplexMatrix m_;
};

/// (m + m^dagger) / 2 divided by its trace.
ComplexMatrix hermitize_normalize(const ComplexMatrix& m);

/// Normalized G G^dagger with G a complex Gaussian dim x dim matrix.
DensityMatrix random_density(std::size_t dim, std::mt19937_64& rng);
ComplexVector random_pure_vector(std::size_t dim, std::mt19937_64& rng);

/// Reduced state on the subsystems listed in `keep` (ascending order is
/// imposed). `dims` lists subsystem dimensions, leftmost factor first.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Column-stacking: entry (r, c) lands at r + c * dim. With this convention
/// vectorize(A X B) = (B^T kron A) vectorize(X).
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexVector& v);

}  // namespace qrc
