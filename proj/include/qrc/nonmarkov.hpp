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
#include <filesystem>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "qrc/core.hpp"
#include "qrc/reservoirs.hpp"

namespace qrc {

/// D = ||rho1 - rho2||_1 / 2, from the singular values of the difference.
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

/// Haar-random pure state and an orthogonal partner (Gram-Schmidt on a
/// second Haar vector).
std::pair<DensityMatrix, DensityMatrix> random_orthogonal_pure_pair(
    std::size_t dim, std::mt19937_64& rng);

enum class DistanceScope {
  kReservoir,  ///< reservoir marginal (default)
  kFull,       ///< full simulated state, joint for the embedded model
};

/// Two models that differ only in their initial state, plus the shared
/// input series that drives them.
struct BlpTrial {
  Reservoir first;
  Reservoir second;
  std::vector<double> inputs;
};

using BlpTrialFactory =
    std::function<BlpTrial(std::size_t pair_index, std::uint64_t seed)>;

struct BlpResult {
  std::vector<double> per_pair_sums;
  double measure = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_pairs = 0;
};

/// Sum of the positive increments of D(rho_{k,1}, rho_{k,2}) over n_steps
/// lockstep updates.
double blp_sum(BlpTrial& trial, std::size_t n_steps,
               DistanceScope scope = DistanceScope::kReservoir);

/// Estimates the discrete non-Markovianity measure as the maximum of
/// blp_sum over n_pairs independent trials. Trial i is built from
/// split_seed(seed, i); pairs are distributed over `workers` threads and the
/// result does not depend on the worker count.
BlpResult blp_measure(const BlpTrialFactory& factory, std::size_t n_pairs,
                      std::size_t n_steps, std::uint64_t seed,
                      std::size_t workers = 1,
                      DistanceScope scope = DistanceScope::kReservoir);

/// Rows `omega,pair_index,sum`.
void write_blp_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, BlpResult>>& by_omega);

}  // namespace qrc
