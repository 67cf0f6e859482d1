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
#include <span>
#include <vector>

#include "qrc/readout.hpp"
#include "qrc/reservoirs.hpp"

namespace qrc {

enum class SeriesSource { kUniformRandom, kMackeyGlass, kSantaFe, kClosedLoop };

/// Input values in [0, 1].
struct InputSeries {
  std::vector<double> values;
  std::uint64_t seed = 0;
  SeriesSource source = SeriesSource::kUniformRandom;
};

/// Affine min/max map onto [0, 1].
struct Scaling {
  double min = 0.0;
  double max = 1.0;

  static Scaling fit(std::span<const double> raw);
  double scale(double x) const { return (x - min) / (max - min); }
  double unscale(double y) const { return min + y * (max - min); }
};

InputSeries gen_uniform_inputs(std::size_t length, std::uint64_t seed);

/// Targets aligned to reservoir steps: values[i] belongs to step
/// first_index + i.
struct AlignedTarget {
  std::size_t first_index = 0;
  std::vector<double> values;

  std::size_t end_index() const { return first_index + values.size(); }
};

/// yhat_k = s_{k - tau}, defined for k >= tau.
AlignedTarget stm_target(std::span<const double> inputs, std::size_t tau);

/// yhat_k = s_{k - d1} s_{k - d2}, defined for k >= max(d1, d2).
AlignedTarget monomial_target(std::span<const double> inputs, std::size_t d1,
                              std::size_t d2);

/// yhat_k = s_{k + steps_ahead}, defined for k < length - steps_ahead.
AlignedTarget forecast_target(std::span<const double> inputs,
                              std::size_t steps_ahead);

struct MackeyGlassParams {
  double decay = 0.1;
  double drive = 0.2;
  int exponent = 10;
  double delay = 17.0;
  double sample_spacing = 3.0;
  double integrator_step = 0.1;
  double transient = 1000.0;
  double history_value = 0.9;
  double history_noise = 0.01;  ///< amplitude of the seeded uniform jitter

  void validate() const;
};

struct GeneratedSeries {
  InputSeries scaled;
  std::vector<double> raw;
  Scaling scaling;
};

/// ds/dt = -decay s + drive s(t - delay) / (1 + s(t - delay)^exponent),
/// integrated with fixed-step RK4. Delayed values at RK half steps come from
/// linear interpolation of the stored grid. Raw samples are taken every
/// sample_spacing after the transient and scaled to [0, 1] by their joint
/// min/max.
GeneratedSeries mackey_glass(const MackeyGlassParams& params,
                             std::size_t n_samples, std::uint64_t seed);

/// One integer sample per line; blank lines are ignored.
GeneratedSeries santa_fe_load(const std::filesystem::path& path);

/// CSV with header `t,raw,scaled`.
void write_series_csv(const std::filesystem::path& path,
                      const GeneratedSeries& series);

enum class ForecastMode { kTeacherForced, kAutonomous };

struct ForecastProtocol {
  ForecastMode mode = ForecastMode::kAutonomous;
  std::size_t horizon = 150;
  bool clip = true;
};

struct ClosedLoopResult {
  std::vector<double> predictions;
  std::size_t clip_events = 0;
};

/// From a washed-out model: measure, predict, and feed the prediction back
/// as the next input (or, teacher-forced, the next entry of `teacher`).
/// Predictions are clipped to [0, 1] before being fed back when clipping is
/// enabled; the returned predictions are the clipped values.
ClosedLoopResult closed_loop_run(Reservoir& model, const ReadoutWeights& weights,
                                 const ObservableSet& observables,
                                 const ForecastProtocol& protocol,
                                 std::span<const double> teacher = {});

}  // namespace qrc
