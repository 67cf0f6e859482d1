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

#include "qrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrc/error.hpp"

namespace qrc {

namespace {

char axis_char(Axis a) {
  switch (a) {
    case Axis::kX: return 'x';
    case Axis::kY: return 'y';
    case Axis::kZ: return 'z';
    case Axis::kPlus: return '+';
    case Axis::kMinus: return '-';
  }
  return '?';
}

constexpr double kImagTol = 1e-10;

}  // namespace

std::string PauliString::label() const {
  std::string out;
  for (const auto& [site, axis] : factors) {
    if (!out.empty()) out += '*';
    out += axis_char(axis);
    out += std::to_string(site);
  }
  return out;
}

ObservableSet::ObservableSet(std::size_t n_qubits,
                             std::vector<PauliString> strings)
    : n_qubits_(n_qubits), strings_(std::move(strings)) {
  require(n_qubits_ >= 1, ErrorKind::kInvalidArgument,
          "observables: need at least one qubit");
  const auto dim = Eigen::Index{1} << n_qubits_;
  operators_.reserve(strings_.size());
  for (const PauliString& s : strings_) {
    require(s.factors.size() == 1 || s.factors.size() == 2,
            ErrorKind::kInvalidArgument,
            "observables: Pauli strings must have length 1 or 2");
    ComplexMatrix op = ComplexMatrix::Identity(dim, dim);
    std::vector<std::size_t> sites;
    for (const auto& [site, axis] : s.factors) {
      require(axis == Axis::kX || axis == Axis::kY || axis == Axis::kZ,
              ErrorKind::kInvalidArgument,
              "observables: only x, y, z factors are Hermitian");
      require(std::find(sites.begin(), sites.end(), site) == sites.end(),
              ErrorKind::kInvalidArgument,
              "observables: repeated site in " + s.label());
      sites.push_back(site);
      op = op * pauli_site(axis, site, n_qubits_);
    }
    operators_.push_back(std::move(op));
  }
}

ObservableSet ObservableSet::single_z(std::size_t n_qubits) {
  std::vector<PauliString> strings;
  for (std::size_t i = 0; i < n_qubits; ++i) {
    strings.push_back(PauliString{{{i, Axis::kZ}}});
  }
  return ObservableSet(n_qubits, std::move(strings));
}

ObservableSet ObservableSet::pauli_strings(std::size_t n_qubits,
                                           bool include_pairs) {
  constexpr Axis kAxes[] = {Axis::kX, Axis::kY, Axis::kZ};
  std::vector<PauliString> strings;
  for (std::size_t i = 0; i < n_qubits; ++i) {
    for (Axis a : kAxes) strings.push_back(PauliString{{{i, a}}});
  }
  if (include_pairs) {
    for (std::size_t i = 0; i < n_qubits; ++i) {
      for (std::size_t j = i + 1; j < n_qubits; ++j) {
        for (Axis a : kAxes) {
          for (Axis b : kAxes) {
            strings.push_back(PauliString{{{i, a}, {j, b}}});
          }
        }
      }
    }
  }
  return ObservableSet(n_qubits, std::move(strings));
}

FeatureRecord measure(const ComplexMatrix& rho, const ObservableSet& set,
                      std::size_t time_index) {
  const auto dim = Eigen::Index{1} << set.n_qubits();
  require(rho.rows() == dim && rho.cols() == dim,
          ErrorKind::kDimensionMismatch,
          "measure: state dimension " + std::to_string(rho.rows()) +
              " does not match " + std::to_string(set.n_qubits()) + " qubits");
  FeatureRecord out{time_index, RealVector(static_cast<Eigen::Index>(set.size()))};
  for (std::size_t k = 0; k < set.size(); ++k) {
    const Complex value =
        set.operators()[k].transpose().cwiseProduct(rho).sum();
    require(std::abs(value.imag()) <= kImagTol, ErrorKind::kNonFinite,
            "measure: expectation of " + set.strings()[k].label() +
                " has imaginary part " + std::to_string(value.imag()));
    out.features(static_cast<Eigen::Index>(k)) = value.real();
  }
  return out;
}

namespace {

RealMatrix design_matrix(std::span<const FeatureRecord> features) {
  const auto rows = static_cast<Eigen::Index>(features.size());
  const Eigen::Index cols = features.front().features.size() + 1;
  RealMatrix x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const RealVector& f = features[static_cast<std::size_t>(r)].features;
    require(f.size() + 1 == cols, ErrorKind::kDimensionMismatch,
            "train: feature records have inconsistent lengths");
    x(r, 0) = 1.0;
    x.row(r).tail(cols - 1) = f.transpose();
  }
  return x;
}

}  // namespace

ReadoutWeights train(std::span<const FeatureRecord> features,
                     std::span<const double> targets, double ridge) {
  require(!features.empty(), ErrorKind::kInvalidArgument,
          "train: no feature records");
  require(features.size() == targets.size(), ErrorKind::kDimensionMismatch,
          "train: " + std::to_string(features.size()) + " feature records but " +
              std::to_string(targets.size()) + " targets");
  require(ridge >= 0.0, ErrorKind::kInvalidArgument,
          "train: ridge must be >= 0");
  const RealMatrix x = design_matrix(features);
  require(static_cast<std::size_t>(x.rows()) >=
              static_cast<std::size_t>(x.cols()),
          ErrorKind::kInvalidArgument,
          "train: need at least as many samples as weights (" +
              std::to_string(x.cols()) + ")");
  const Eigen::Map<const RealVector> y(targets.data(),
                                       static_cast<Eigen::Index>(targets.size()));
  RealVector solution;
  if (ridge == 0.0) {
    solution = x.completeOrthogonalDecomposition().solve(y);
  } else {
    RealMatrix gram = x.transpose() * x;
    gram.diagonal().tail(gram.rows() - 1).array() += ridge;
    solution = gram.ldlt().solve(x.transpose() * y);
  }
  require(solution.allFinite(), ErrorKind::kNonFinite,
          "train: non-finite readout weights");
  return ReadoutWeights{solution(0), solution.tail(solution.size() - 1)};
}

double predict(const ReadoutWeights& w, const FeatureRecord& f) {
  require(w.weights.size() == f.features.size(), ErrorKind::kDimensionMismatch,
          "predict: " + std::to_string(w.weights.size()) + " weights but " +
              std::to_string(f.features.size()) + " features");
  return w.bias + w.weights.dot(f.features);
}

std::vector<double> predict(const ReadoutWeights& w,
                            std::span<const FeatureRecord> features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (const FeatureRecord& f : features) out.push_back(predict(w, f));
  return out;
}

double capacity(std::span<const double> outputs,
                std::span<const double> targets) {
  require(outputs.size() == targets.size(), ErrorKind::kDimensionMismatch,
          "capacity: series lengths differ");
  require(outputs.size() >= 2, ErrorKind::kInvalidArgument,
          "capacity: need at least two samples");
  const auto n = static_cast<double>(outputs.size());
  double mean_y = 0.0;
  double mean_t = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    mean_y += outputs[k];
    mean_t += targets[k];
  }
  mean_y /= n;
  mean_t /= n;
  double cov = 0.0;
  double var_y = 0.0;
  double var_t = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const double dy = outputs[k] - mean_y;
    const double dt = targets[k] - mean_t;
    cov += dy * dt;
    var_y += dy * dy;
    var_t += dt * dt;
  }
  if (!(var_y > 0.0) || !(var_t > 0.0)) {
    fail(ErrorKind::kUndefinedCapacity,
         "capacity: zero variance in " +
             std::string(var_y > 0.0 ? "targets" : "outputs"));
  }
  return std::clamp(cov * cov / (var_y * var_t), 0.0, 1.0);
}

double mse(std::span<const double> outputs, std::span<const double> targets) {
  require(outputs.size() == targets.size(), ErrorKind::kDimensionMismatch,
          "mse: series lengths differ");
  require(!outputs.empty(), ErrorKind::kInvalidArgument, "mse: empty series");
  double acc = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const double d = outputs[k] - targets[k];
    acc += d * d;
  }
  return acc / static_cast<double>(outputs.size());
}

double feature_condition_number(std::span<const FeatureRecord> features) {
  require(!features.empty(), ErrorKind::kInvalidArgument,
          "feature_condition_number: no feature records");
  const RealMatrix x = design_matrix(features);
  Eigen::BDCSVD<RealMatrix> svd(x);
  const RealVector& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

}  // namespace qrc
