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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qrc/nonmarkov.hpp"
#include "qrc/readout.hpp"
#include "qrc/reservoirs.hpp"
#include "qrc/tasks.hpp"

namespace qrc {

enum class ModelKind { kMarkov, kResidual, kEmbedded };
enum class TaskKind { kMemory, kMackeyGlass, kSantaFe, kBlp, kDecay };
enum class ObservableKind {
  kSingleZ,      ///< "z": sigma^z_i
  kPauliSingle,  ///< "pauli1": sigma^a_i
  kPauliPairs,   ///< "pauli12": sigma^a_i and sigma^a_i sigma^b_j, i < j
};

struct ModelConfig {
  ModelKind kind = ModelKind::kResidual;
  std::size_t n_qubits = 3;
  double dt = 10.0;
  double field = 1.0;
  double gamma = 0.1;
  double lambda = 1.0;
  std::size_t tau_e = 10;
  double eta = 0.7853981633974483;
  double omega = 1.0;
};

struct TaskConfig {
  TaskKind kind = TaskKind::kMemory;
  // memory
  std::vector<std::size_t> stm_delays;
  std::vector<std::pair<std::size_t, std::size_t>> monomials;
  // mackey-glass
  MackeyGlassParams mackey_glass;
  std::size_t horizon = 150;
  bool clip = true;
  // santa fe
  std::string santa_fe_path;
  std::vector<std::size_t> steps_ahead{1, 2, 3};
  // blp
  std::size_t blp_steps = 1000;
  DistanceScope blp_scope = DistanceScope::kReservoir;
  // decay
  std::vector<double> decay_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  double capacity_floor = 1e-4;
};

struct Phases {
  std::size_t washout = 1000;
  std::size_t train = 1000;
  std::size_t test = 1000;
};

struct ExperimentConfig {
  ModelConfig model;
  TaskConfig task;
  Phases phases;
  std::size_t realizations = 100;
  std::uint64_t master_seed = 1;
  ObservableKind observables = ObservableKind::kSingleZ;
  double ridge = 0.0;
  std::string output_path;
  std::size_t workers = 1;
  bool skip_failures = false;

  /// Throws kConfig with the offending field path.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Strict: unknown keys and out-of-domain values are rejected with the
/// field path in the message. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

ObservableSet make_observables(ObservableKind kind, std::size_t n_qubits);

/// Per-realization random streams: stream 0 samples the couplings, 1 the
/// initial state, 2 the input series.
struct RealizationSeeds {
  std::uint64_t realization;
  std::uint64_t couplings;
  std::uint64_t initial_state;
  std::uint64_t inputs;

  static RealizationSeeds derive(std::uint64_t master_seed, std::size_t index);
};

/// Builds the configured reservoir for one realization.
Reservoir make_reservoir(const ModelConfig& model, const RealizationSeeds& seeds);

/// Two copies of one sampled reservoir started from an orthogonal pure pair,
/// driven by a shared uniform input series. Usable as a BlpTrialFactory.
BlpTrial make_blp_trial(const ModelConfig& model, std::size_t n_steps,
                        std::uint64_t realization_seed);

struct RunRecord {
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  double wall_time = 0.0;        ///< seconds; logged, not part of records.csv
  double condition_number = 0.0;  ///< of the training features (0 if none)
};

struct MetricSummary {
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (n - 1)
  std::size_t count = 0;
};

/// Closed-loop trajectory of one realization (Mackey-Glass runs).
struct Trajectory {
  std::size_t realization = 0;
  std::vector<double> truth;
  std::vector<double> predictions;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;
  std::vector<MetricSummary> summary;
  std::vector<Trajectory> trajectories;
  std::vector<std::string> log;
  std::vector<std::string> failures;
  /// Emitted input series for Mackey-Glass and Santa Fe runs.
  GeneratedSeries series;
  bool has_series = false;

  /// Mean of `metric`; throws if absent.
  double mean(const std::string& metric) const;
  const MetricSummary& find(const std::string& metric) const;
  std::vector<double> values(const std::string& metric) const;
};

std::string stm_metric(std::size_t tau);
std::string monomial_metric(std::size_t d1, std::size_t d2);
std::string santa_fe_metric(std::size_t steps_ahead);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<MetricSummary> summarize(const std::vector<RunRecord>& records);

/// Writes config.resolved, records.csv, summary.csv and log.txt (plus
/// trajectories.csv / series.csv / blp.csv when applicable) into `dir`.
void write_outputs(const ExperimentResult& result,
                   const std::filesystem::path& dir);

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<ExperimentResult> runs;
};

/// One run per value of the dotted config path `parameter` (for example
/// "model.lambda"). Throws kConfig for unknown parameters or an empty list.
SweepResult sweep(const ExperimentConfig& config, const std::string& parameter,
                  const std::vector<double>& values);

/// Long format: `param,value,realization,metric,metric_value`.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);

/// Least-squares slope of ln C(tau) over the delays whose capacity exceeds
/// `floor`. Returns NaN when fewer than two points qualify.
double log_capacity_slope(const std::vector<std::size_t>& delays,
                          const std::vector<double>& capacities, double floor);

}  // namespace qrc
