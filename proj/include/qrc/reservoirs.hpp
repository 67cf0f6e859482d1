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
#include <deque>
#include <span>
#include <variant>
#include <vector>

#include "qrc/core.hpp"
#include "qrc/dynamics.hpp"
#include "qrc/readout.hpp"

namespace qrc {

/// rho_{k+1} = exp(L(s_{k+1}) dt) rho_k.
class MarkovReservoir {
 public:
  MarkovReservoir(const LindbladSpec& spec, double dt, DensityMatrix initial);

  void step(double input);

  const DensityMatrix& state() const { return state_; }
  std::size_t n_qubits() const { return generator_.spec().hamiltonian.n_qubits; }
  double dt() const { return dt_; }

 private:
  DrivenLiouvillian generator_;
  double dt_;
  DensityMatrix state_;
};

/// rho_{k+1} = exp(L(s_{k+1}) dt) [lambda rho_k + (1 - lambda) rho_delayed],
/// where rho_delayed is the state produced tau_e - 1 steps before rho_k, so
/// the skip connection re-injects the input seen tau_e steps before the
/// current one. The history is pre-filled with copies of the initial state.
class ResidualReservoir {
 public:
  ResidualReservoir(const LindbladSpec& spec, double dt, double lambda,
                    std::size_t tau_e, DensityMatrix initial);

  void step(double input);

  const DensityMatrix& state() const { return history_.front(); }
  /// Newest first; always holds tau_e states.
  const std::deque<DensityMatrix>& history() const { return history_; }
  std::size_t n_qubits() const { return generator_.spec().hamiltonian.n_qubits; }
  double lambda() const { return lambda_; }
  std::size_t tau_e() const { return tau_e_; }

 private:
  DrivenLiouvillian generator_;
  double dt_;
  double lambda_;
  std::size_t tau_e_;
  std::deque<DensityMatrix> history_;
};

/// cos(eta) I + i sin(eta) SWAP(reservoir qubit `site`, auxiliary qubit
/// `site`) on the 2N-qubit space; reservoir qubits come first.
ComplexMatrix partial_swap_unitary(double eta, std::size_t site,
                                   std::size_t n_reservoir);

/// Depolarizing channel of strength omega applied independently to each of
/// the N auxiliary qubits (the last N qubits) of a 2N-qubit state.
ComplexMatrix depolarize_aux(const ComplexMatrix& rho, std::size_t n_reservoir,
                             double omega);

/// Reservoir qubits coupled to an equal number of auxiliary qubits. One step
/// applies the input-driven Lindblad propagator to the reservoir factor, the
/// N partial swaps, and then the auxiliary depolarizing channels.
class EmbeddedReservoir {
 public:
  /// Auxiliaries start maximally mixed.
  EmbeddedReservoir(const LindbladSpec& spec, double dt, double eta,
                    double omega, const DensityMatrix& initial_reservoir);

  void step(double input);

  const DensityMatrix& joint_state() const { return joint_; }
  DensityMatrix reservoir_state() const;
  std::size_t n_qubits() const { return generator_.spec().hamiltonian.n_qubits; }
  double eta() const { return eta_; }
  double omega() const { return omega_; }

  /// Applies (E (x) id_aux) to a joint state without forming the joint
  /// superoperator.
  static ComplexMatrix apply_reservoir_map(const Superoperator& map,
                                           const ComplexMatrix& joint);

 private:
  DrivenLiouvillian generator_;
  double dt_;
  double eta_;
  double omega_;
  ComplexMatrix swaps_;
  DensityMatrix joint_;
};

using Reservoir = std::variant<MarkovReservoir, ResidualReservoir, EmbeddedReservoir>;

void step(Reservoir& model, double input);
/// State of the reservoir qubits (the marginal for the embedded model).
DensityMatrix reservoir_state(const Reservoir& model);
/// Full simulated state (joint reservoir + auxiliary for the embedded model).
DensityMatrix full_state(const Reservoir& model);
std::size_t reservoir_qubits(const Reservoir& model);

/// Steps through `inputs`, recording observables on the reservoir qubits
/// after every step with index >= washout.
std::vector<FeatureRecord> run_sequence(Reservoir& model,
                                        std::span<const double> inputs,
                                        const ObservableSet& observables,
                                        std::size_t washout);

}  // namespace qrc
