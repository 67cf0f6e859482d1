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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrc/core.hpp"

namespace qrc {

/// Product of one or two single-site Paulis on distinct qubits.
struct PauliString {
  std::vector<std::pair<std::size_t, Axis>> factors;

  std::string label() const;
};

/// Observables whose expectations feed the linear readout.
class ObservableSet {
 public:
  ObservableSet(std::size_t n_qubits, std::vector<PauliString> strings);

  /// {sigma^z_i}.
  static ObservableSet single_z(std::size_t n_qubits);
  /// Every sigma^a_i, plus sigma^a_i sigma^b_j for i < j when
  /// `include_pairs`; a, b in {x, y, z}.
  static ObservableSet pauli_strings(std::size_t n_qubits, bool include_pairs);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t size() const { return strings_.size(); }
  const std::vector<PauliString>& strings() const { return strings_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

 private:
  std::size_t n_qubits_;
  std::vector<PauliString> strings_;
  std::vector<ComplexMatrix> operators_;
};

struct FeatureRecord {
  std::size_t time_index = 0;
  RealVector features;
};

struct ReadoutWeights {
  double bias = 0.0;
  RealVector weights;
};

/// Expectations Tr(rho O_i). `rho` must act on exactly the qubits of `set`.
FeatureRecord measure(const ComplexMatrix& rho, const ObservableSet& set,
                      std::size_t time_index = 0);

/// Least squares with a bias column. ridge == 0 gives the minimum-norm
/// solution through a complete orthogonal decomposition; ridge > 0 adds
/// ridge * ||weights||^2 (bias unpenalized).
ReadoutWeights train(std::span<const FeatureRecord> features,
                     std::span<const double> targets, double ridge = 0.0);

double predict(const ReadoutWeights& w, const FeatureRecord& f);
std::vector<double> predict(const ReadoutWeights& w,
                            std::span<const FeatureRecord> features);

/// cov^2(y, yhat) / (var(y) var(yhat)), in [0, 1]. Throws
/// kUndefinedCapacity when either series has zero variance.
double capacity(std::span<const double> outputs,
                std::span<const double> targets);

double mse(std::span<const double> outputs, std::span<const double> targets);

/// Ratio of extreme singular values of the feature matrix (bias column
/// included). Infinite for rank-deficient features.
double feature_condition_number(std::span<const FeatureRecord> features);

}  // namespace qrc
