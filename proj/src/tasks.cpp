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

#include "qrc/tasks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <string>

#include "qrc/error.hpp"

namespace qrc {

Scaling Scaling::fit(std::span<const double> raw) {
  require(!raw.empty(), ErrorKind::kInvalidArgument, "scaling: empty series");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  Scaling s{*lo, *hi};
  // A constant series keeps unit width so scale() stays finite.
  if (s.max == s.min) s.max = s.min + 1.0;
  return s;
}

InputSeries gen_uniform_inputs(std::size_t length, std::uint64_t seed) {
  require(length >= 1, ErrorKind::kInvalidArgument,
          "uniform inputs: length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  InputSeries out{{}, seed, SeriesSource::kUniformRandom};
  out.values.resize(length);
  for (double& v : out.values) v = uniform(rng);
  return out;
}

AlignedTarget stm_target(std::span<const double> inputs, std::size_t tau) {
  require(tau < inputs.size(), ErrorKind::kInvalidArgument,
          "stm target: delay " + std::to_string(tau) +
              " not shorter than the series");
  AlignedTarget out{tau, {}};
  out.values.assign(inputs.begin(), inputs.end() - static_cast<std::ptrdiff_t>(tau));
  return out;
}

AlignedTarget monomial_target(std::span<const double> inputs, std::size_t d1,
                              std::size_t d2) {
  const std::size_t lag = std::max(d1, d2);
  require(lag < inputs.size(), ErrorKind::kInvalidArgument,
          "monomial target: delay " + std::to_string(lag) +
              " not shorter than the series");
  AlignedTarget out{lag, {}};
  out.values.reserve(inputs.size() - lag);
  for (std::size_t k = lag; k < inputs.size(); ++k) {
    out.values.push_back(inputs[k - d1] * inputs[k - d2]);
  }
  return out;
}

AlignedTarget forecast_target(std::span<const double> inputs,
                              std::size_t steps_ahead) {
  require(steps_ahead >= 1 && steps_ahead < inputs.size(),
          ErrorKind::kInvalidArgument,
          "forecast target: steps ahead must lie in [1, length)");
  AlignedTarget out{0, {}};
  out.values.assign(inputs.begin() + static_cast<std::ptrdiff_t>(steps_ahead),
                    inputs.end());
  return out;
}

namespace {

// Number of integrator steps in `span`, or -1 when it is not an integer.
long grid_steps(double span, double step) {
  const double ratio = span / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) return -1;
  return static_cast<long>(rounded);
}

}  // namespace

void MackeyGlassParams::validate() const {
  require(integrator_step > 0.0, ErrorKind::kInvalidArgument,
          "mackey-glass: integrator step must be positive");
  require(delay > 0.0 && sample_spacing > 0.0 && transient >= 0.0,
          ErrorKind::kInvalidArgument,
          "mackey-glass: delay and spacing must be positive");
  require(grid_steps(delay, integrator_step) > 0 &&
              grid_steps(sample_spacing, integrator_step) > 0 &&
              grid_steps(transient, integrator_step) >= 0,
          ErrorKind::kInvalidArgument,
          "mackey-glass: integrator step must divide the delay, the sample "
          "spacing and the transient");
  require(exponent >= 1, ErrorKind::kInvalidArgument,
          "mackey-glass: exponent must be positive");
}

GeneratedSeries mackey_glass(const MackeyGlassParams& params,
                             std::size_t n_samples, std::uint64_t seed) {
  params.validate();
  require(n_samples >= 1, ErrorKind::kInvalidArgument,
          "mackey-glass: need at least one sample");
  const double h = params.integrator_step;
  const auto delay_steps = static_cast<std::size_t>(grid_steps(params.delay, h));
  const auto sample_steps =
      static_cast<std::size_t>(grid_steps(params.sample_spacing, h));
  const auto transient_steps =
      static_cast<std::size_t>(grid_steps(params.transient, h));

  auto rhs = [&params](double x, double delayed) {
    return -params.decay * x +
           params.drive * delayed / (1.0 + std::pow(delayed, params.exponent));
  };

  // ring[(n + i) % size] holds x at grid step n - delay_steps + i.
  const std::size_t size = delay_steps + 1;
  std::vector<double> ring(size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-params.history_noise,
                                                params.history_noise);
  // Jitter knots sit one time unit apart on [-delay, 0] and are linearly
  // interpolated onto the grid, so the history does not depend on h.
  const auto n_knots = static_cast<std::size_t>(std::ceil(params.delay)) + 1;
  std::vector<double> knots(n_knots, 0.0);
  if (params.history_noise > 0.0) {
    for (double& v : knots) v = jitter(rng);
  }
  for (std::size_t i = 0; i < size; ++i) {
    const double t = static_cast<double>(i) * h;  // time since -delay
    const auto j = std::min(static_cast<std::size_t>(t), n_knots - 2);
    const double frac = t - static_cast<double>(j);
    ring[i] = params.history_value + (1.0 - frac) * knots[j] + frac * knots[j + 1];
  }
  std::size_t oldest = 0;  // index of x_{n - delay_steps}
  double x = ring[(oldest + delay_steps) % size];

  GeneratedSeries out;
  out.raw.reserve(n_samples);
  const std::size_t total_steps = transient_steps + (n_samples - 1) * sample_steps;
  for (std::size_t n = 0;; ++n) {
    if (n >= transient_steps && (n - transient_steps) % sample_steps == 0) {
      out.raw.push_back(x);
      if (out.raw.size() == n_samples) break;
    }
    if (n >= total_steps) break;
    const double d0 = ring[oldest];
    const double d1 = ring[(oldest + 1) % size];
    const double dh = 0.5 * (d0 + d1);
    const double k1 = rhs(x, d0);
    const double k2 = rhs(x + 0.5 * h * k1, dh);
    const double k3 = rhs(x + 0.5 * h * k2, dh);
    const double k4 = rhs(x + h * k3, d1);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require(std::isfinite(x), ErrorKind::kNonFinite,
            "mackey-glass: integration diverged");
    ring[oldest] = x;  // slot of the dropped oldest value becomes x_{n+1}
    oldest = (oldest + 1) % size;
  }

  out.scaling = Scaling::fit(out.raw);
  out.scaled = InputSeries{{}, seed, SeriesSource::kMackeyGlass};
  out.scaled.values.reserve(out.raw.size());
  for (double v : out.raw) out.scaled.values.push_back(out.scaling.scale(v));
  return out;
}

GeneratedSeries santa_fe_load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo,
          "santa fe: cannot open " + path.string());
  GeneratedSeries out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    require(ec == std::errc{} && ptr == end && std::isfinite(value),
            ErrorKind::kParse,
            "santa fe: " + path.string() + ":" + std::to_string(line_no) +
                ": not a number: '" + line + "'");
    out.raw.push_back(value);
  }
  require(!out.raw.empty(), ErrorKind::kParse,
          "santa fe: " + path.string() + " contains no samples");
  out.scaling = Scaling::fit(out.raw);
  out.scaled = InputSeries{{}, 0, SeriesSource::kSantaFe};
  for (double v : out.raw) out.scaled.values.push_back(out.scaling.scale(v));
  return out;
}

void write_series_csv(const std::filesystem::path& path,
                      const GeneratedSeries& series) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  out << "t,raw,scaled\n" << std::setprecision(17);
  for (std::size_t t = 0; t < series.raw.size(); ++t) {
    out << t << ',' << series.raw[t] << ',' << series.scaled.values[t] << '\n';
  }
}

ClosedLoopResult closed_loop_run(Reservoir& model, const ReadoutWeights& weights,
                                 const ObservableSet& observables,
                                 const ForecastProtocol& protocol,
                                 std::span<const double> teacher) {
  require(protocol.horizon >= 1, ErrorKind::kInvalidArgument,
          "closed loop: horizon must be positive");
  const bool forced = protocol.mode == ForecastMode::kTeacherForced;
  if (forced) {
    require(teacher.size() + 1 >= protocol.horizon, ErrorKind::kInvalidArgument,
            "closed loop: teacher series shorter than the horizon");
  }
  ClosedLoopResult out;
  out.predictions.reserve(protocol.horizon);
  for (std::size_t k = 0; k < protocol.horizon; ++k) {
    const FeatureRecord f = measure(reservoir_state(model).matrix(), observables, k);
    double y = predict(weights, f);
    require(std::isfinite(y), ErrorKind::kNonFinite,
            "closed loop: non-finite prediction at step " + std::to_string(k));
    if (protocol.clip && (y < 0.0 || y > 1.0)) {
      y = std::clamp(y, 0.0, 1.0);
      ++out.clip_events;
    }
    out.predictions.push_back(y);
    if (k + 1 == protocol.horizon) break;
    step(model, forced ? teacher[k] : y);
  }
  return out;
}

}  // namespace qrc
