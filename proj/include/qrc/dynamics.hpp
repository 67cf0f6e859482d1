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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qrc/core.hpp"

namespace qrc {

/// Transverse-field Ising couplings. `couplings` is symmetric with zero
/// diagonal and entries in [-1, 1], in units of the field strength.
struct IsingParams {
  std::size_t n_qubits = 1;
  RealMatrix couplings;
  double field = 1.0;
  std::uint64_t seed = 0;

  /// Draws J_ij uniformly from [-1, 1] for i < j.
  static IsingParams sample(std::size_t n_qubits, double field,
                            std::uint64_t seed);
  void validate() const;
};

struct LindbladSpec {
  IsingParams hamiltonian;
  double gamma = 0.1;  ///< sigma_minus decay rate on every qubit

  void validate() const;
};

/// Linear map on column-stacked density matrices.
struct Superoperator {
  ComplexMatrix matrix;

  std::size_t dim2() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t dim() const;

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  Superoperator compose(const Superoperator& after) const;
};

/// H(s) = sum_{i<j} J_ij X_i X_j + h sum Z_i + h (s + 1) sum X_i.
ComplexMatrix build_hamiltonian(const IsingParams& params, double input);

/// Superoperator of -i[H, .] + sum_k rate_k (L_k . L_k^dag - {L_k^dag L_k, .}/2).
Superoperator lindblad_superoperator(const ComplexMatrix& hamiltonian,
                                     std::span<const ComplexMatrix> jumps,
                                     std::span<const double> rates);

Superoperator build_liouvillian(const LindbladSpec& spec, double input);

/// Input-independent and input-linear parts of the Liouvillian, so
/// L(s) = base + s * drive can be formed per step without rebuilding the
/// Kronecker products.
class DrivenLiouvillian {
 public:
  explicit DrivenLiouvillian(const LindbladSpec& spec);

  const LindbladSpec& spec() const { return spec_; }
  std::size_t dim() const { return dim_; }

  Superoperator at(double input) const;
  Superoperator propagator(double input, double dt) const;

 private:
  LindbladSpec spec_;
  std::size_t dim_;
  ComplexMatrix base_;
  ComplexMatrix drive_;
};

Superoperator propagator(const Superoperator& liouvillian, double dt);

/// Minimum separation of the second-smallest |eigenvalue| of L from zero
/// for the stationary state to count as unique.
inline constexpr double kEspGapTol = 1e-8;

/// Unique stationary state of L. Throws kEspViolation when the kernel of L
/// is degenerate.
DensityMatrix steady_state(const Superoperator& liouvillian);

struct SpectralSplit {
  DensityMatrix steady_state;
  Superoperator s_part;  ///< |rho_ss>><<I| / <<I|rho_ss>>
  Superoperator t_part;  ///< propagator - s_part
  double t_norm = 0.0;           ///< largest singular value of t_part
  double spectral_radius = 0.0;  ///< largest |eigenvalue| of t_part
  double decay_rate = 0.0;       ///< -ln(t_norm)
  double asymptotic_rate = 0.0;  ///< -ln(spectral_radius)

  bool norm_contractive() const { return t_norm < 1.0; }
};

/// Splits a propagator into its stationary projector and the remainder.
/// Throws kEspViolation when the remainder's spectral radius is >= 1.
SpectralSplit spectral_split(const Superoperator& propagator,
                             const DensityMatrix& steady);

struct DecayBound {
  double rate = 0.0;        ///< worst-case per-step decay constant a
  bool from_spectral_norm;  ///< false when some ||T(s)|| >= 1 and the
                            ///< spectral radius had to be used instead
  double max_t_norm = 0.0;
  double max_spectral_radius = 0.0;
};

/// Worst case over the input grid of the per-step contraction of the
/// propagator's transient part, a with e^{-a} = max_s ||T(s)||.
DecayBound decay_rate_bound(const LindbladSpec& spec, double dt,
                            std::span<const double> input_grid);

/// Choi matrix sum_{ij} |i><j| (x) E(|i><j|) of a superoperator.
ComplexMatrix choi_matrix(const Superoperator& map);

}  // namespace qrc
