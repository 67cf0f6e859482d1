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

#include "qrc/nonmarkov.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <string>

#include "qrc/error.hpp"
#include "qrc/parallel.hpp"

namespace qrc {

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  require(rho1.rows() == rho2.rows() && rho1.cols() == rho2.cols(),
          ErrorKind::kDimensionMismatch, "trace_distance: dimension mismatch");
  Eigen::JacobiSVD<ComplexMatrix> svd(rho1 - rho2);
  return 0.5 * svd.singularValues().sum();
}

std::pair<DensityMatrix, DensityMatrix> random_orthogonal_pure_pair(
    std::size_t dim, std::mt19937_64& rng) {
  require(dim >= 2, ErrorKind::kInvalidArgument,
          "orthogonal pair: dimension must be at least 2");
  const ComplexVector a = random_pure_vector(dim, rng);
  ComplexVector b = random_pure_vector(dim, rng);
  b -= a * a.dot(b);
  return {DensityMatrix::pure(a), DensityMatrix::pure(b)};
}

namespace {

DensityMatrix scoped_state(const Reservoir& model, DistanceScope scope) {
  return scope == DistanceScope::kReservoir ? reservoir_state(model)
                                            : full_state(model);
}

}  // namespace

double blp_sum(BlpTrial& trial, std::size_t n_steps, DistanceScope scope) {
  require(n_steps >= 1, ErrorKind::kInvalidArgument,
          "blp: need at least one step");
  require(trial.inputs.size() >= n_steps, ErrorKind::kInvalidArgument,
          "blp: input series shorter than the step count");
  double previous = trace_distance(scoped_state(trial.first, scope).matrix(),
                                   scoped_state(trial.second, scope).matrix());
  double sum = 0.0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    step(trial.first, trial.inputs[k]);
    step(trial.second, trial.inputs[k]);
    const double current =
        trace_distance(scoped_state(trial.first, scope).matrix(),
                       scoped_state(trial.second, scope).matrix());
    if (current > previous) sum += current - previous;
    previous = current;
  }
  return sum;
}

BlpResult blp_measure(const BlpTrialFactory& factory, std::size_t n_pairs,
                      std::size_t n_steps, std::uint64_t seed,
                      std::size_t workers, DistanceScope scope) {
  require(n_pairs >= 1, ErrorKind::kInvalidArgument,
          "blp: need at least one pair");
  require(n_steps >= 1, ErrorKind::kInvalidArgument,
          "blp: need at least one step");
  BlpResult out;
  out.n_pairs = n_pairs;
  out.n_steps = n_steps;
  out.per_pair_sums.assign(n_pairs, 0.0);
  parallel_for(n_pairs, workers, [&](std::size_t i) {
    BlpTrial trial = factory(i, split_seed(seed, i));
    out.per_pair_sums[i] = blp_sum(trial, n_steps, scope);
  });
  out.measure = *std::max_element(out.per_pair_sums.begin(),
                                  out.per_pair_sums.end());
  return out;
}

void write_blp_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, BlpResult>>& by_omega) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  out << "omega,pair_index,sum\n" << std::setprecision(17);
  for (const auto& [omega, result] : by_omega) {
    for (std::size_t i = 0; i < result.per_pair_sums.size(); ++i) {
      out << omega << ',' << i << ',' << result.per_pair_sums[i] << '\n';
    }
  }
}

}  // namespace qrc
