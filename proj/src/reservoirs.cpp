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

#include "qrc/reservoirs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qrc/error.hpp"

namespace qrc {

namespace {

void check_input(double input) {
  require(input >= 0.0 && input <= 1.0 && std::isfinite(input),
          ErrorKind::kInvalidArgument,
          "reservoir input " + std::to_string(input) + " outside [0, 1]");
}

void check_dt(double dt) {
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::kInvalidArgument,
          "reservoir: dt must be positive");
}

void check_dim(const DensityMatrix& rho, std::size_t dim, const char* who) {
  require(rho.dim() == dim, ErrorKind::kDimensionMismatch,
          std::string(who) + ": initial state has dimension " +
              std::to_string(rho.dim()) + ", expected " + std::to_string(dim));
}

// Hermitize and renormalize; no eigenvalue clipping.
DensityMatrix tidy(const ComplexMatrix& m) {
  return DensityMatrix::unchecked(hermitize_normalize(m));
}

}  // namespace

MarkovReservoir::MarkovReservoir(const LindbladSpec& spec, double dt,
                                 DensityMatrix initial)
    : generator_(spec), dt_(dt), state_(std::move(initial)) {
  check_dt(dt_);
  check_dim(state_, generator_.dim(), "markov reservoir");
}

void MarkovReservoir::step(double input) {
  check_input(input);
  state_ = tidy(generator_.propagator(input, dt_).apply(state_.matrix()));
}

ResidualReservoir::ResidualReservoir(const LindbladSpec& spec, double dt,
                                     double lambda, std::size_t tau_e,
                                     DensityMatrix initial)
    : generator_(spec), dt_(dt), lambda_(lambda), tau_e_(tau_e) {
  check_dt(dt_);
  require(lambda_ >= 0.0 && lambda_ <= 1.0, ErrorKind::kInvalidArgument,
          "residual reservoir: lambda must lie in [0, 1]");
  require(tau_e_ >= 1, ErrorKind::kInvalidArgument,
          "residual reservoir: tau_e must be positive");
  check_dim(initial, generator_.dim(), "residual reservoir");
  history_.assign(tau_e_, initial);
}

void ResidualReservoir::step(double input) {
  check_input(input);
  const ComplexMatrix mixed = lambda_ * history_.front().matrix() +
                              (1.0 - lambda_) * history_.back().matrix();
  history_.push_front(tidy(generator_.propagator(input, dt_).apply(mixed)));
  history_.pop_back();
}

ComplexMatrix partial_swap_unitary(double eta, std::size_t site,
                                   std::size_t n_reservoir) {
  require(eta >= 0.0 && eta < std::numbers::pi / 2.0,
          ErrorKind::kInvalidArgument, "partial swap: eta must lie in [0, pi/2)");
  require(site < n_reservoir, ErrorKind::kInvalidArgument,
          "partial swap: site " + std::to_string(site) + " out of range");
  const std::size_t n = 2 * n_reservoir;
  const auto dim = Eigen::Index{1} << n;
  const std::size_t aux = n_reservoir + site;
  // SWAP = (I + XX + YY + ZZ) / 2
  ComplexMatrix swap = ComplexMatrix::Identity(dim, dim);
  for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
    swap += pauli_site(a, site, n) * pauli_site(a, aux, n);
  }
  swap *= 0.5;
  return std::cos(eta) * ComplexMatrix::Identity(dim, dim) +
         Complex{0.0, std::sin(eta)} * swap;
}

ComplexMatrix depolarize_aux(const ComplexMatrix& rho, std::size_t n_reservoir,
                             double omega) {
  require(omega >= 0.0 && omega <= 1.0, ErrorKind::kInvalidArgument,
          "depolarize: omega must lie in [0, 1]");
  const std::size_t n = 2 * n_reservoir;
  const auto dim = Eigen::Index{1} << n;
  require(rho.rows() == dim && rho.cols() == dim, ErrorKind::kDimensionMismatch,
          "depolarize: state does not act on 2N qubits");
  if (omega == 0.0) return rho;
  const double k0 = 1.0 - 0.75 * omega;
  const double k1 = 0.25 * omega;
  ComplexMatrix cur = rho;
  ComplexMatrix next(dim, dim);
  for (std::size_t j = 0; j < n_reservoir; ++j) {
    const std::size_t site = n_reservoir + j;
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - site);
    // Kraus terms K0 rho K0 + sum_a (omega/4) sigma^a rho sigma^a, with the
    // Paulis acting as bit flips (x), signs (z) or both (y).
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double zc = (c & mask) ? -1.0 : 1.0;
      for (Eigen::Index r = 0; r < dim; ++r) {
        const double zz = ((r & mask) ? -1.0 : 1.0) * zc;
        const Complex flipped = cur(r ^ mask, c ^ mask);
        const Complex x_term = flipped;
        const Complex y_term = zz * flipped;
        const Complex z_term = zz * cur(r, c);
        next(r, c) = k0 * cur(r, c) + k1 * (x_term + y_term + z_term);
      }
    }
    cur.swap(next);
  }
  return cur;
}

EmbeddedReservoir::EmbeddedReservoir(const LindbladSpec& spec, double dt,
                                     double eta, double omega,
                                     const DensityMatrix& initial_reservoir)
    : generator_(spec), dt_(dt), eta_(eta), omega_(omega) {
  check_dt(dt_);
  require(omega_ >= 0.0 && omega_ <= 1.0, ErrorKind::kInvalidArgument,
          "embedded reservoir: omega must lie in [0, 1]");
  check_dim(initial_reservoir, generator_.dim(), "embedded reservoir");
  const std::size_t n = n_qubits();
  const auto dim = static_cast<Eigen::Index>(generator_.dim());
  // Sites in ascending order; the factors commute (disjoint supports).
  swaps_ = ComplexMatrix::Identity(dim * dim, dim * dim);
  for (std::size_t i = 0; i < n; ++i) {
    swaps_ = partial_swap_unitary(eta_, i, n) * swaps_;
  }
  joint_ = DensityMatrix::unchecked(
      kron(initial_reservoir.matrix(), DensityMatrix::maximally_mixed(generator_.dim()).matrix()));
}

ComplexMatrix EmbeddedReservoir::apply_reservoir_map(const Superoperator& map,
                                                     const ComplexMatrix& joint) {
  const auto d = static_cast<Eigen::Index>(map.dim());
  require(joint.rows() % d == 0 && joint.rows() == joint.cols(),
          ErrorKind::kDimensionMismatch,
          "embedded: joint state does not factor over the reservoir");
  const Eigen::Index da = joint.rows() / d;
  // Column (a + b da) of `blocks` holds vec of the reservoir block
  // <a| rho |b>.
  ComplexMatrix blocks(d * d, da * da);
  for (Eigen::Index b = 0; b < da; ++b) {
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index rc = 0; rc < d; ++rc) {
        for (Eigen::Index r = 0; r < d; ++r) {
          blocks(r + rc * d, a + b * da) = joint(r * da + a, rc * da + b);
        }
      }
    }
  }
  const ComplexMatrix mapped = map.matrix * blocks;
  ComplexMatrix out(joint.rows(), joint.cols());
  for (Eigen::Index b = 0; b < da; ++b) {
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index rc = 0; rc < d; ++rc) {
        for (Eigen::Index r = 0; r < d; ++r) {
          out(r * da + a, rc * da + b) = mapped(r + rc * d, a + b * da);
        }
      }
    }
  }
  return out;
}

void EmbeddedReservoir::step(double input) {
  check_input(input);
  ComplexMatrix rho =
      apply_reservoir_map(generator_.propagator(input, dt_), joint_.matrix());
  rho = swaps_ * rho * swaps_.adjoint();
  rho = depolarize_aux(rho, n_qubits(), omega_);
  joint_ = tidy(rho);
}

DensityMatrix EmbeddedReservoir::reservoir_state() const {
  const std::size_t d = generator_.dim();
  const std::size_t dims[] = {d, d};
  const std::size_t keep[] = {0};
  return partial_trace(joint_, dims, keep);
}

void step(Reservoir& model, double input) {
  std::visit([input](auto& m) { m.step(input); }, model);
}

DensityMatrix reservoir_state(const Reservoir& model) {
  return std::visit(
      [](const auto& m) -> DensityMatrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, EmbeddedReservoir>) {
          return m.reservoir_state();
        } else {
          return m.state();
        }
      },
      model);
}

DensityMatrix full_state(const Reservoir& model) {
  return std::visit(
      [](const auto& m) -> DensityMatrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, EmbeddedReservoir>) {
          return m.joint_state();
        } else {
          return m.state();
        }
      },
      model);
}

std::size_t reservoir_qubits(const Reservoir& model) {
  return std::visit([](const auto& m) { return m.n_qubits(); }, model);
}

std::vector<FeatureRecord> run_sequence(Reservoir& model,
                                        std::span<const double> inputs,
                                        const ObservableSet& observables,
                                        std::size_t washout) {
  require(!inputs.empty(), ErrorKind::kInvalidArgument,
          "run_sequence: empty input sequence");
  require(washout < inputs.size(), ErrorKind::kInvalidArgument,
          "run_sequence: washout must be shorter than the input sequence");
  require(observables.n_qubits() == reservoir_qubits(model),
          ErrorKind::kDimensionMismatch,
          "run_sequence: observables and reservoir differ in qubit count");
  std::vector<FeatureRecord> records;
  records.reserve(inputs.size() - washout);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    step(model, inputs[k]);
    if (k >= washout) {
      records.push_back(measure(reservoir_state(model).matrix(), observables, k));
    }
  }
  return records;
}

}  // namespace qrc
