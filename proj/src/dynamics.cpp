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

#include "qrc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qrc/error.hpp"

namespace qrc {

IsingParams IsingParams::sample(std::size_t n_qubits, double field,
                                std::uint64_t seed) {
  IsingParams p;
  p.n_qubits = n_qubits;
  p.field = field;
  p.seed = seed;
  const auto n = static_cast<Eigen::Index>(n_qubits);
  p.couplings = RealMatrix::Zero(n, n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      p.couplings(i, j) = uniform(rng);
      p.couplings(j, i) = p.couplings(i, j);
    }
  }
  return p;
}

void IsingParams::validate() const {
  require(n_qubits >= 1, ErrorKind::kInvalidArgument,
          "ising: n_qubits must be positive");
  const auto n = static_cast<Eigen::Index>(n_qubits);
  require(couplings.rows() == n && couplings.cols() == n,
          ErrorKind::kDimensionMismatch, "ising: couplings must be N x N");
  require(field > 0.0 && std::isfinite(field), ErrorKind::kInvalidArgument,
          "ising: field must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(couplings(i, i) == 0.0, ErrorKind::kInvalidArgument,
            "ising: couplings diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      require(couplings(i, j) == couplings(j, i), ErrorKind::kInvalidArgument,
              "ising: couplings must be symmetric");
      require(std::abs(couplings(i, j)) <= 1.0, ErrorKind::kInvalidArgument,
              "ising: couplings must lie in [-1, 1]");
    }
  }
}

void LindbladSpec::validate() const {
  hamiltonian.validate();
  require(gamma >= 0.0 && std::isfinite(gamma), ErrorKind::kInvalidArgument,
          "lindblad: gamma must be >= 0");
}

std::size_t Superoperator::dim() const {
  return static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
  require(static_cast<std::size_t>(rho.size()) == dim2(),
          ErrorKind::kDimensionMismatch,
          "superoperator: state dimension mismatch");
  return devectorize(matrix * vectorize(rho));
}

Superoperator Superoperator::compose(const Superoperator& after) const {
  return Superoperator{after.matrix * matrix};
}

namespace {

ComplexMatrix field_sum(Axis axis, std::size_t n) {
  const auto dim = Eigen::Index{1} << n;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) sum += pauli_site(axis, i, n);
  return sum;
}

ComplexMatrix static_hamiltonian(const IsingParams& params) {
  const std::size_t n = params.n_qubits;
  ComplexMatrix h = params.field * field_sum(Axis::kZ, n) +
                    params.field * field_sum(Axis::kX, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double jij = params.couplings(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j));
      if (jij == 0.0) continue;
      h += jij * pauli_site(Axis::kX, i, n) * pauli_site(Axis::kX, j, n);
    }
  }
  return h;
}

ComplexMatrix commutator_superoperator(const ComplexMatrix& h) {
  const auto d = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const Complex minus_i{0.0, -1.0};
  return minus_i * (kron(id, h) - kron(h.transpose(), id));
}

void check_input(double input) {
  require(input >= 0.0 && input <= 1.0, ErrorKind::kInvalidArgument,
          "input " + std::to_string(input) + " outside [0, 1]");
}

}  // namespace

ComplexMatrix build_hamiltonian(const IsingParams& params, double input) {
  check_input(input);
  return static_hamiltonian(params) +
         input * params.field * field_sum(Axis::kX, params.n_qubits);
}

Superoperator lindblad_superoperator(const ComplexMatrix& hamiltonian,
                                     std::span<const ComplexMatrix> jumps,
                                     std::span<const double> rates) {
  require(jumps.size() == rates.size(), ErrorKind::kDimensionMismatch,
          "lindblad: one rate per jump operator required");
  const auto d = hamiltonian.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix l = commutator_superoperator(hamiltonian);
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    if (rates[k] == 0.0) continue;
    const ComplexMatrix& jump = jumps[k];
    const ComplexMatrix n = jump.adjoint() * jump;
    l += rates[k] * (kron(jump.conjugate(), jump) - 0.5 * kron(id, n) -
                     0.5 * kron(n.transpose(), id));
  }
  return Superoperator{std::move(l)};
}

Superoperator build_liouvillian(const LindbladSpec& spec, double input) {
  const ComplexMatrix h = build_hamiltonian(spec.hamiltonian, input);
  const std::size_t n = spec.hamiltonian.n_qubits;
  std::vector<ComplexMatrix> jumps;
  std::vector<double> rates(n, spec.gamma);
  for (std::size_t i = 0; i < n; ++i) {
    jumps.push_back(pauli_site(Axis::kMinus, i, n));
  }
  return lindblad_superoperator(h, jumps, rates);
}

DrivenLiouvillian::DrivenLiouvillian(const LindbladSpec& spec)
    : spec_(spec), dim_(std::size_t{1} << spec.hamiltonian.n_qubits) {
  spec_.validate();
  base_ = build_liouvillian(spec_, 0.0).matrix;
  drive_ = commutator_superoperator(
      spec_.hamiltonian.field * field_sum(Axis::kX, spec_.hamiltonian.n_qubits));
}

Superoperator DrivenLiouvillian::at(double input) const {
  check_input(input);
  return Superoperator{base_ + input * drive_};
}

Superoperator DrivenLiouvillian::propagator(double input, double dt) const {
  return qrc::propagator(at(input), dt);
}

Superoperator propagator(const Superoperator& liouvillian, double dt) {
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::kInvalidArgument,
          "propagator: dt must be positive");
  return Superoperator{matrix_exp(liouvillian.matrix * dt)};
}

namespace {

RealVector identity_row(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  RealVector row = RealVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) row(i + i * d) = 1.0;
  return row;
}

}  // namespace

DensityMatrix steady_state(const Superoperator& liouvillian) {
  const ComplexMatrix& l = liouvillian.matrix;
  const std::size_t dim = liouvillian.dim();
  require(dim * dim == liouvillian.dim2(), ErrorKind::kDimensionMismatch,
          "steady_state: superoperator size is not a square");

  Eigen::ComplexEigenSolver<ComplexMatrix> es(l, false);
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(l.rows()));
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    moduli.push_back(std::abs(es.eigenvalues()(i)));
  }
  std::sort(moduli.begin(), moduli.end());
  if (moduli.size() > 1 && moduli[1] <= kEspGapTol) {
    fail(ErrorKind::kEspViolation,
         "steady_state: stationary state is not unique (second smallest "
         "|eigenvalue| = " +
             std::to_string(moduli[1]) + ")");
  }

  // The trace row is a left null vector of L, so it can replace the first
  // (diagonal) row and pin the normalization.
  ComplexMatrix system = l;
  system.row(0) = identity_row(dim).cast<Complex>().transpose();
  ComplexVector rhs = ComplexVector::Zero(l.rows());
  rhs(0) = 1.0;
  const ComplexVector solution = system.fullPivLu().solve(rhs);
  ComplexMatrix rho = hermitize_normalize(devectorize(solution));
  DensityMatrix out = DensityMatrix::unchecked(rho);
  const double min_ev = out.min_eigenvalue();
  require(min_ev >= -DensityMatrix::kPsdTol, ErrorKind::kEspViolation,
          "steady_state: solution is not positive semidefinite (min "
          "eigenvalue " +
              std::to_string(min_ev) + ")");
  return out;
}

SpectralSplit spectral_split(const Superoperator& propagator,
                             const DensityMatrix& steady) {
  const std::size_t dim = steady.dim();
  require(propagator.dim2() == dim * dim, ErrorKind::kDimensionMismatch,
          "spectral_split: steady state does not match propagator");
  const ComplexVector ket = vectorize(steady.matrix());
  const ComplexVector bra = identity_row(dim).cast<Complex>();
  const Complex overlap = bra.dot(ket);

  SpectralSplit out{steady, Superoperator{ket * bra.adjoint() / overlap},
                    Superoperator{}};
  out.t_part.matrix = propagator.matrix - out.s_part.matrix;
  out.t_norm = spectral_norm(out.t_part.matrix);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(out.t_part.matrix, false);
  out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (out.spectral_radius >= 1.0) {
    fail(ErrorKind::kEspViolation,
         "spectral_split: transient part has spectral radius " +
             std::to_string(out.spectral_radius) + " >= 1");
  }
  out.decay_rate = -std::log(out.t_norm);
  out.asymptotic_rate = -std::log(out.spectral_radius);
  return out;
}

DecayBound decay_rate_bound(const LindbladSpec& spec, double dt,
                            std::span<const double> input_grid) {
  require(!input_grid.empty(), ErrorKind::kInvalidArgument,
          "decay_rate_bound: empty input grid");
  const DrivenLiouvillian generator(spec);
  DecayBound bound{0.0, true, 0.0, 0.0};
  double min_norm_rate = 0.0;
  double min_asymptotic_rate = 0.0;
  bool first = true;
  for (double s : input_grid) {
    const Superoperator l = generator.at(s);
    const SpectralSplit split =
        spectral_split(propagator(l, dt), steady_state(l));
    bound.max_t_norm = std::max(bound.max_t_norm, split.t_norm);
    bound.max_spectral_radius =
        std::max(bound.max_spectral_radius, split.spectral_radius);
    if (first || split.decay_rate < min_norm_rate) {
      min_norm_rate = split.decay_rate;
    }
    if (first || split.asymptotic_rate < min_asymptotic_rate) {
      min_asymptotic_rate = split.asymptotic_rate;
    }
    first = false;
  }
  bound.from_spectral_norm = bound.max_t_norm < 1.0;
  bound.rate = bound.from_spectral_norm ? min_norm_rate : min_asymptotic_rate;
  return bound;
}

ComplexMatrix choi_matrix(const Superoperator& map) {
  const auto d = static_cast<Eigen::Index>(map.dim());
  ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = map.apply(unit);
    }
  }
  return choi;
}

}  // namespace qrc
