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

#include "qrc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "qrc/error.hpp"
#include "qrc/parallel.hpp"

namespace qrc {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::kConfig, path + ": " + what);
}

void config_check(bool ok, const std::string& path, const std::string& what) {
  if (!ok) config_error(path, what);
}

// Reads keys of one JSON object, rejecting type mismatches and unknown keys.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    config_check(j_.is_object(), path_.empty() ? "<root>" : path_,
                 "expected an object");
  }

  std::string path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    config_check(v.is_number(), path(key), "expected a number");
    out = v.get<double>();
    config_check(std::isfinite(out), path(key), "must be finite");
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    out = to_integer<Int>(at(key), path(key));
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = at(key);
    config_check(v.is_boolean(), path(key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = at(key);
    config_check(v.is_string(), path(key), "expected a string");
    out = v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) config_error(path(item.key()), "unknown key");
    }
  }

  template <class Int>
  static Int to_integer(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
    if (v.is_number_integer()) {
      const auto x = v.get<std::int64_t>();
      config_check(x >= 0, path, "must be a non-negative integer");
      return static_cast<Int>(x);
    }
    if (v.is_number_float()) {
      const double x = v.get<double>();
      config_check(x >= 0 && std::floor(x) == x, path,
                   "must be a non-negative integer");
      return static_cast<Int>(x);
    }
    config_error(path, "expected a non-negative integer");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<ModelKind> kModelNames[] = {
    {ModelKind::kMarkov, "markov"},
    {ModelKind::kResidual, "residual"},
    {ModelKind::kEmbedded, "embedded"}};
constexpr EnumName<TaskKind> kTaskNames[] = {
    {TaskKind::kMemory, "memory"},
    {TaskKind::kMackeyGlass, "mackey_glass"},
    {TaskKind::kSantaFe, "santa_fe"},
    {TaskKind::kBlp, "blp"},
    {TaskKind::kDecay, "decay"}};
constexpr EnumName<ObservableKind> kObservableNames[] = {
    {ObservableKind::kSingleZ, "z"},
    {ObservableKind::kPauliSingle, "pauli1"},
    {ObservableKind::kPauliPairs, "pauli12"}};
constexpr EnumName<DistanceScope> kScopeNames[] = {
    {DistanceScope::kReservoir, "reservoir"}, {DistanceScope::kFull, "full"}};

template <class E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <class E, std::size_t N>
void read_enum(ObjectReader& r, const std::string& key,
               const EnumName<E> (&table)[N], E& out) {
  std::string text;
  r.string(key, text);
  if (text.empty()) return;
  for (const auto& entry : table) {
    if (text == entry.name) {
      out = entry.value;
      return;
    }
  }
  std::string allowed;
  for (const auto& entry : table) {
    allowed += allowed.empty() ? "" : ", ";
    allowed += entry.name;
  }
  config_error(r.path(key), "unknown value '" + text + "' (expected one of " +
                                allowed + ")");
}

std::vector<std::size_t> read_index_list(ObjectReader& r, const std::string& key,
                                         std::vector<std::size_t> fallback) {
  if (!r.has(key)) return fallback;
  const json& v = r.at(key);
  config_check(v.is_array(), r.path(key), "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(ObjectReader::to_integer<std::size_t>(
        v[i], r.path(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  const ModelConfig& m = model;
  config_check(m.n_qubits >= 1 && m.n_qubits <= 6, "model.n_qubits",
               "must lie in [1, 6]");
  config_check(m.dt > 0.0, "model.dt", "must be > 0");
  config_check(m.field > 0.0, "model.field", "must be > 0");
  config_check(m.gamma >= 0.0, "model.gamma", "must be >= 0");
  config_check(m.lambda >= 0.0 && m.lambda <= 1.0, "model.lambda",
               "must lie in [0, 1]");
  config_check(m.tau_e >= 1, "model.tau_e", "must be >= 1");
  config_check(m.eta >= 0.0 && m.eta < std::numbers::pi / 2.0, "model.eta",
               "must lie in [0, pi/2)");
  config_check(m.omega >= 0.0 && m.omega <= 1.0, "model.omega",
               "must lie in [0, 1]");
  config_check(m.kind != ModelKind::kEmbedded || m.n_qubits <= 4,
               "model.n_qubits", "embedded model supports at most 4 qubits");

  config_check(realizations >= 1, "realizations", "must be >= 1");
  config_check(workers >= 1, "workers", "must be >= 1");
  config_check(ridge >= 0.0, "ridge", "must be >= 0");

  const std::size_t n_features = make_observables(observables, m.n_qubits).size();
  const bool trains = task.kind == TaskKind::kMemory ||
                      task.kind == TaskKind::kMackeyGlass ||
                      task.kind == TaskKind::kSantaFe ||
                      (task.kind == TaskKind::kDecay && !task.stm_delays.empty());
  if (trains) {
    config_check(phases.train >= n_features + 1, "phases.train",
                 "must be at least the number of readout weights (" +
                     std::to_string(n_features + 1) + ")");
  }
  const bool tests = task.kind != TaskKind::kMackeyGlass && trains;
  if (tests) config_check(phases.test >= 2, "phases.test", "must be >= 2");

  switch (task.kind) {
    case TaskKind::kMemory:
      config_check(!task.stm_delays.empty() || !task.monomials.empty(), "task",
                   "memory task needs stm_delays or monomials");
      [[fallthrough]];
    case TaskKind::kDecay:
      for (std::size_t i = 0; i < task.stm_delays.size(); ++i) {
        config_check(task.stm_delays[i] <= phases.washout,
                     "task.stm_delays[" + std::to_string(i) + "]",
                     "must not exceed phases.washout");
      }
      for (std::size_t i = 0; i < task.monomials.size(); ++i) {
        config_check(std::max(task.monomials[i].first,
                              task.monomials[i].second) <= phases.washout,
                     "task.monomials[" + std::to_string(i) + "]",
                     "delays must not exceed phases.washout");
      }
      if (task.kind == TaskKind::kDecay) {
        config_check(!task.decay_grid.empty(), "task.decay_grid",
                     "must not be empty");
        for (std::size_t i = 0; i < task.decay_grid.size(); ++i) {
          config_check(task.decay_grid[i] >= 0.0 && task.decay_grid[i] <= 1.0,
                       "task.decay_grid[" + std::to_string(i) + "]",
                       "must lie in [0, 1]");
        }
        config_check(task.capacity_floor > 0.0, "task.capacity_floor",
                     "must be > 0");
      }
      break;
    case TaskKind::kMackeyGlass:
      config_check(task.horizon >= 1, "task.horizon", "must be >= 1");
      try {
        task.mackey_glass.validate();
      } catch (const Error& e) {
        config_error("task.mackey_glass", e.what());
      }
      break;
    case TaskKind::kSantaFe:
      config_check(!task.santa_fe_path.empty(), "task.santa_fe_path",
                   "must name the dataset file");
      config_check(!task.steps_ahead.empty(), "task.steps_ahead",
                   "must not be empty");
      for (std::size_t i = 0; i < task.steps_ahead.size(); ++i) {
        config_check(task.steps_ahead[i] >= 1,
                     "task.steps_ahead[" + std::to_string(i) + "]",
                     "must be >= 1");
      }
      break;
    case TaskKind::kBlp:
      config_check(task.blp_steps >= 1, "task.blp_steps", "must be >= 1");
      config_check((std::size_t{1} << m.n_qubits) >= 2, "model.n_qubits",
                   "must be >= 1");
      break;
  }
}

json to_json(const ExperimentConfig& c) {
  json monomials = json::array();
  for (const auto& [a, b] : c.task.monomials) monomials.push_back({a, b});
  const MackeyGlassParams& mg = c.task.mackey_glass;
  return json{
      {"model",
       {{"kind", name_of(kModelNames, c.model.kind)},
        {"n_qubits", c.model.n_qubits},
        {"dt", c.model.dt},
        {"field", c.model.field},
        {"gamma", c.model.gamma},
        {"lambda", c.model.lambda},
        {"tau_e", c.model.tau_e},
        {"eta", c.model.eta},
        {"omega", c.model.omega}}},
      {"task",
       {{"kind", name_of(kTaskNames, c.task.kind)},
        {"stm_delays", c.task.stm_delays},
        {"monomials", monomials},
        {"mackey_glass",
         {{"decay", mg.decay},
          {"drive", mg.drive},
          {"exponent", mg.exponent},
          {"delay", mg.delay},
          {"sample_spacing", mg.sample_spacing},
          {"integrator_step", mg.integrator_step},
          {"transient", mg.transient},
          {"history_value", mg.history_value},
          {"history_noise", mg.history_noise}}},
        {"horizon", c.task.horizon},
        {"clip", c.task.clip},
        {"santa_fe_path", c.task.santa_fe_path},
        {"steps_ahead", c.task.steps_ahead},
        {"blp_steps", c.task.blp_steps},
        {"blp_scope", name_of(kScopeNames, c.task.blp_scope)},
        {"decay_grid", c.task.decay_grid},
        {"capacity_floor", c.task.capacity_floor}}},
      {"phases",
       {{"washout", c.phases.washout},
        {"train", c.phases.train},
        {"test", c.phases.test}}},
      {"realizations", c.realizations},
      {"seed", c.master_seed},
      {"observables", name_of(kObservableNames, c.observables)},
      {"ridge", c.ridge},
      {"output", c.output_path},
      {"workers", c.workers},
      {"skip_failures", c.skip_failures}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  ObjectReader root(j, "");
  if (root.has("model")) {
    ObjectReader r(root.at("model"), "model");
    read_enum(r, "kind", kModelNames, c.model.kind);
    r.integer("n_qubits", c.model.n_qubits);
    r.number("dt", c.model.dt);
    r.number("field", c.model.field);
    r.number("gamma", c.model.gamma);
    r.number("lambda", c.model.lambda);
    r.integer("tau_e", c.model.tau_e);
    r.number("eta", c.model.eta);
    r.number("omega", c.model.omega);
    r.finish();
  }
  if (root.has("task")) {
    ObjectReader r(root.at("task"), "task");
    read_enum(r, "kind", kTaskNames, c.task.kind);
    c.task.stm_delays = read_index_list(r, "stm_delays", c.task.stm_delays);
    if (r.has("monomials")) {
      const json& v = r.at("monomials");
      config_check(v.is_array(), r.path("monomials"),
                   "expected an array of [d1, d2] pairs");
      c.task.monomials.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = r.path("monomials") + "[" + std::to_string(i) + "]";
        config_check(v[i].is_array() && v[i].size() == 2, p,
                     "expected a [d1, d2] pair");
        c.task.monomials.emplace_back(
            ObjectReader::to_integer<std::size_t>(v[i][0], p + "[0]"),
            ObjectReader::to_integer<std::size_t>(v[i][1], p + "[1]"));
      }
    }
    if (r.has("mackey_glass")) {
      ObjectReader m(r.at("mackey_glass"), r.path("mackey_glass"));
      MackeyGlassParams& mg = c.task.mackey_glass;
      m.number("decay", mg.decay);
      m.number("drive", mg.drive);
      m.integer("exponent", mg.exponent);
      m.number("delay", mg.delay);
      m.number("sample_spacing", mg.sample_spacing);
      m.number("integrator_step", mg.integrator_step);
      m.number("transient", mg.transient);
      m.number("history_value", mg.history_value);
      m.number("history_noise", mg.history_noise);
      m.finish();
    }
    r.integer("horizon", c.task.horizon);
    r.boolean("clip", c.task.clip);
    r.string("santa_fe_path", c.task.santa_fe_path);
    c.task.steps_ahead = read_index_list(r, "steps_ahead", c.task.steps_ahead);
    r.integer("blp_steps", c.task.blp_steps);
    read_enum(r, "blp_scope", kScopeNames, c.task.blp_scope);
    if (r.has("decay_grid")) {
      const json& v = r.at("decay_grid");
      config_check(v.is_array(), r.path("decay_grid"), "expected an array");
      c.task.decay_grid.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        config_check(v[i].is_number(),
                     r.path("decay_grid") + "[" + std::to_string(i) + "]",
                     "expected a number");
        c.task.decay_grid.push_back(v[i].get<double>());
      }
    }
    r.number("capacity_floor", c.task.capacity_floor);
    r.finish();
  }
  if (root.has("phases")) {
    ObjectReader r(root.at("phases"), "phases");
    r.integer("washout", c.phases.washout);
    r.integer("train", c.phases.train);
    r.integer("test", c.phases.test);
    r.finish();
  }
  root.integer("realizations", c.realizations);
  root.integer("seed", c.master_seed);
  read_enum(root, "observables", kObservableNames, c.observables);
  root.number("ridge", c.ridge);
  root.string("output", c.output_path);
  root.integer("workers", c.workers);
  root.boolean("skip_failures", c.skip_failures);
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ObservableSet make_observables(ObservableKind kind, std::size_t n_qubits) {
  switch (kind) {
    case ObservableKind::kSingleZ: return ObservableSet::single_z(n_qubits);
    case ObservableKind::kPauliSingle:
      return ObservableSet::pauli_strings(n_qubits, false);
    case ObservableKind::kPauliPairs:
      return ObservableSet::pauli_strings(n_qubits, true);
  }
  return ObservableSet::single_z(n_qubits);
}

RealizationSeeds RealizationSeeds::derive(std::uint64_t master_seed,
                                          std::size_t index) {
  const std::uint64_t r = split_seed(master_seed, index);
  return RealizationSeeds{r, split_seed(r, 0), split_seed(r, 1), split_seed(r, 2)};
}

namespace {

LindbladSpec make_spec(const ModelConfig& m, std::uint64_t couplings_seed) {
  return LindbladSpec{IsingParams::sample(m.n_qubits, m.field, couplings_seed),
                      m.gamma};
}

Reservoir build_reservoir(const ModelConfig& m, const LindbladSpec& spec,
                          DensityMatrix initial) {
  switch (m.kind) {
    case ModelKind::kMarkov:
      return MarkovReservoir(spec, m.dt, std::move(initial));
    case ModelKind::kResidual:
      return ResidualReservoir(spec, m.dt, m.lambda, m.tau_e, std::move(initial));
    case ModelKind::kEmbedded:
      return EmbeddedReservoir(spec, m.dt, m.eta, m.omega, initial);
  }
  fail(ErrorKind::kConfig, "model.kind: unsupported");
}

}  // namespace

Reservoir make_reservoir(const ModelConfig& model, const RealizationSeeds& seeds) {
  const LindbladSpec spec = make_spec(model, seeds.couplings);
  std::mt19937_64 rng(seeds.initial_state);
  return build_reservoir(model, spec,
                         random_density(std::size_t{1} << model.n_qubits, rng));
}

std::string stm_metric(std::size_t tau) {
  return "stm_capacity_tau_" + std::to_string(tau);
}

std::string monomial_metric(std::size_t d1, std::size_t d2) {
  return "monomial_capacity_" + std::to_string(d1) + "_" + std::to_string(d2);
}

std::string santa_fe_metric(std::size_t steps_ahead) {
  return "santafe_capacity_eta_" + std::to_string(steps_ahead);
}

double log_capacity_slope(const std::vector<std::size_t>& delays,
                          const std::vector<double>& capacities, double floor) {
  require(delays.size() == capacities.size(), ErrorKind::kDimensionMismatch,
          "log_capacity_slope: length mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (capacities[i] > floor) {
      xs.push_back(static_cast<double>(delays[i]));
      ys.push_back(std::log(capacities[i]));
    }
  }
  if (xs.size() < 2) return std::nan("");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::nan("");
}

namespace {

using Clock = std::chrono::steady_clock;

struct RealizationOutput {
  std::vector<RunRecord> records;
  std::vector<std::string> log;
  Trajectory trajectory;
  bool has_trajectory = false;
  std::string failure;
};

struct Readout {
  ReadoutWeights weights;
  double capacity;
};

// Trains on records [0, train) and scores capacity on [train, train + test)
// for a target that is defined for steps >= target.first_index.
Readout fit_and_score(std::span<const FeatureRecord> features,
                      std::size_t train_len, const AlignedTarget& target,
                      double ridge) {
  auto target_at = [&target](std::size_t k) {
    require(k >= target.first_index && k < target.end_index(),
            ErrorKind::kInvalidArgument, "target undefined at step " +
                                             std::to_string(k));
    return target.values[k - target.first_index];
  };
  std::vector<double> train_y;
  std::vector<double> test_y;
  for (std::size_t i = 0; i < features.size(); ++i) {
    (i < train_len ? train_y : test_y).push_back(target_at(features[i].time_index));
  }
  const auto train_f = features.first(train_len);
  const auto test_f = features.subspan(train_len);
  Readout out{train(train_f, train_y, ridge), 0.0};
  out.capacity = capacity(predict(out.weights, test_f), test_y);
  return out;
}

void add_record(RealizationOutput& out, std::size_t r, std::uint64_t seed,
                std::string metric, double value, double cond) {
  out.records.push_back(RunRecord{r, seed, std::move(metric), value, 0.0, cond});
}

std::vector<FeatureRecord> drive(Reservoir& model, std::span<const double> inputs,
                                 const ObservableSet& obs, std::size_t washout) {
  return run_sequence(model, inputs, obs, washout);
}

void memory_capacities(const ExperimentConfig& c, std::size_t r,
                       const RealizationSeeds& seeds, const ObservableSet& obs,
                       RealizationOutput& out, std::vector<double>* stm_caps) {
  const Phases& p = c.phases;
  Reservoir model = make_reservoir(c.model, seeds);
  const InputSeries inputs =
      gen_uniform_inputs(p.washout + p.train + p.test, seeds.inputs);
  const std::vector<FeatureRecord> features =
      drive(model, inputs.values, obs, p.washout);
  const double cond =
      feature_condition_number(std::span(features).first(p.train));
  for (std::size_t tau : c.task.stm_delays) {
    const double cap =
        fit_and_score(features, p.train, stm_target(inputs.values, tau), c.ridge)
            .capacity;
    if (stm_caps) stm_caps->push_back(cap);
    add_record(out, r, seeds.realization, stm_metric(tau), cap, cond);
  }
  for (const auto& [d1, d2] : c.task.monomials) {
    const double cap = fit_and_score(features, p.train,
                                     monomial_target(inputs.values, d1, d2),
                                     c.ridge)
                           .capacity;
    add_record(out, r, seeds.realization, monomial_metric(d1, d2), cap, cond);
  }
}

void mackey_glass_realization(const ExperimentConfig& c, std::size_t r,
                              const RealizationSeeds& seeds,
                              const ObservableSet& obs,
                              const GeneratedSeries& series,
                              RealizationOutput& out) {
  const Phases& p = c.phases;
  const std::vector<double>& s = series.scaled.values;
  Reservoir model = make_reservoir(c.model, seeds);
  const std::size_t driven = p.washout + p.train;
  const std::vector<FeatureRecord> features =
      drive(model, std::span(s).first(driven), obs, p.washout);
  const AlignedTarget next = forecast_target(s, 1);
  std::vector<double> train_y;
  for (const FeatureRecord& f : features) {
    train_y.push_back(next.values[f.time_index - next.first_index]);
  }
  const ReadoutWeights w = train(features, train_y, c.ridge);
  const double cond = feature_condition_number(features);
  const double teacher_mse = mse(predict(w, features), train_y);

  const ForecastProtocol protocol{ForecastMode::kAutonomous, c.task.horizon,
                                  c.task.clip};
  const ClosedLoopResult loop = closed_loop_run(model, w, obs, protocol);
  const std::vector<double> truth(s.begin() + static_cast<std::ptrdiff_t>(driven),
                                  s.begin() + static_cast<std::ptrdiff_t>(
                                                  driven + c.task.horizon));
  add_record(out, r, seeds.realization, "mse", mse(loop.predictions, truth), cond);
  add_record(out, r, seeds.realization, "teacher_forced_mse", teacher_mse, cond);
  add_record(out, r, seeds.realization, "clip_events",
             static_cast<double>(loop.clip_events), cond);
  out.trajectory = Trajectory{r, truth, loop.predictions};
  out.has_trajectory = true;
}

void santa_fe_realization(const ExperimentConfig& c, std::size_t r,
                          const RealizationSeeds& seeds, const ObservableSet& obs,
                          const GeneratedSeries& series, RealizationOutput& out) {
  const Phases& p = c.phases;
  const std::vector<double>& s = series.scaled.values;
  Reservoir model = make_reservoir(c.model, seeds);
  const std::vector<FeatureRecord> features =
      drive(model, std::span(s).first(p.washout + p.train + p.test), obs,
            p.washout);
  const double cond =
      feature_condition_number(std::span(features).first(p.train));
  for (std::size_t ahead : c.task.steps_ahead) {
    const double cap =
        fit_and_score(features, p.train, forecast_target(s, ahead), c.ridge)
            .capacity;
    add_record(out, r, seeds.realization, santa_fe_metric(ahead), cap, cond);
  }
}

}  // namespace

BlpTrial make_blp_trial(const ModelConfig& model, std::size_t n_steps,
                        std::uint64_t realization_seed) {
  const RealizationSeeds seeds{realization_seed, split_seed(realization_seed, 0),
                               split_seed(realization_seed, 1),
                               split_seed(realization_seed, 2)};
  const LindbladSpec spec = make_spec(model, seeds.couplings);
  std::mt19937_64 rng(seeds.initial_state);
  auto [a, b] = random_orthogonal_pure_pair(std::size_t{1} << model.n_qubits, rng);
  return BlpTrial{build_reservoir(model, spec, std::move(a)),
                  build_reservoir(model, spec, std::move(b)),
                  gen_uniform_inputs(n_steps, seeds.inputs).values};
}

namespace {

void blp_realization(const ExperimentConfig& c, std::size_t r,
                     const RealizationSeeds& seeds, RealizationOutput& out) {
  BlpTrial trial = make_blp_trial(c.model, c.task.blp_steps, seeds.realization);
  add_record(out, r, seeds.realization, "blp_sum",
             blp_sum(trial, c.task.blp_steps, c.task.blp_scope), 0.0);
}

void decay_realization(const ExperimentConfig& c, std::size_t r,
                       const RealizationSeeds& seeds, const ObservableSet& obs,
                       RealizationOutput& out) {
  const LindbladSpec spec = make_spec(c.model, seeds.couplings);
  const DecayBound bound = decay_rate_bound(spec, c.model.dt, c.task.decay_grid);
  add_record(out, r, seeds.realization, "decay_rate", bound.rate, 0.0);
  add_record(out, r, seeds.realization, "max_t_norm", bound.max_t_norm, 0.0);
  add_record(out, r, seeds.realization, "max_spectral_radius",
             bound.max_spectral_radius, 0.0);
  add_record(out, r, seeds.realization, "rate_from_spectral_norm",
             bound.from_spectral_norm ? 1.0 : 0.0, 0.0);
  if (c.task.stm_delays.empty()) return;
  std::vector<double> caps;
  memory_capacities(c, r, seeds, obs, out, &caps);
  add_record(out, r, seeds.realization, "log_capacity_slope",
             log_capacity_slope(c.task.stm_delays, caps, c.task.capacity_floor),
             0.0);
}

std::size_t steps_per_realization(const ExperimentConfig& c) {
  const Phases& p = c.phases;
  switch (c.task.kind) {
    case TaskKind::kMemory:
    case TaskKind::kSantaFe: return p.washout + p.train + p.test;
    case TaskKind::kMackeyGlass: return p.washout + p.train + c.task.horizon;
    case TaskKind::kBlp: return 2 * c.task.blp_steps;
    case TaskKind::kDecay:
      return c.task.stm_delays.empty() ? 0 : p.washout + p.train + p.test;
  }
  return 0;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<MetricSummary> summarize(const std::vector<RunRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_metric;
  for (const RunRecord& rec : records) {
    auto [it, inserted] = by_metric.try_emplace(rec.metric);
    if (inserted) order.push_back(rec.metric);
    it->second.push_back(rec.value);
  }
  std::vector<MetricSummary> out;
  for (const std::string& metric : order) {
    const std::vector<double>& v = by_metric[metric];
    MetricSummary s{metric, 0.0, 0.0, v.size()};
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    out.push_back(s);
  }
  return out;
}

const MetricSummary& ExperimentResult::find(const std::string& metric) const {
  for (const MetricSummary& s : summary) {
    if (s.metric == metric) return s;
  }
  fail(ErrorKind::kInvalidArgument, "no metric named " + metric);
}

double ExperimentResult::mean(const std::string& metric) const {
  return find(metric).mean;
}

std::vector<double> ExperimentResult::values(const std::string& metric) const {
  std::vector<double> out;
  for (const RunRecord& rec : records) {
    if (rec.metric == metric) out.push_back(rec.value);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  const ObservableSet obs = make_observables(config.observables, config.model.n_qubits);
  const std::size_t n = config.realizations;

  if (config.task.kind == TaskKind::kMackeyGlass) {
    // One shared series; realizations vary couplings and initial states.
    result.series = mackey_glass(config.task.mackey_glass,
                                 config.phases.washout + config.phases.train +
                                     config.task.horizon,
                                 split_seed(config.master_seed, 0xFFFFFFFFULL));
    result.has_series = true;
    result.log.push_back("mackey-glass scaling: min=" +
                         format_double(result.series.scaling.min) +
                         " max=" + format_double(result.series.scaling.max));
  } else if (config.task.kind == TaskKind::kSantaFe) {
    result.series = santa_fe_load(config.task.santa_fe_path);
    result.has_series = true;
    std::size_t longest = 0;
    for (std::size_t a : config.task.steps_ahead) longest = std::max(longest, a);
    const std::size_t needed = config.phases.washout + config.phases.train +
                               config.phases.test + longest;
    config_check(result.series.raw.size() >= needed, "task.santa_fe_path",
                 "dataset has " + std::to_string(result.series.raw.size()) +
                     " samples, the phases need " + std::to_string(needed));
    result.log.push_back("santa fe scaling: min=" +
                         format_double(result.series.scaling.min) +
                         " max=" + format_double(result.series.scaling.max));
  }

  // Runtime estimate from a short calibration run.
  if (const std::size_t steps = steps_per_realization(config); steps > 0) {
    Reservoir probe = make_reservoir(config.model, RealizationSeeds::derive(config.master_seed, 0));
    const auto t0 = Clock::now();
    constexpr int kProbeSteps = 3;
    for (int k = 0; k < kProbeSteps; ++k) step(probe, 0.5);
    const double per_step =
        std::chrono::duration<double>(Clock::now() - t0).count() / kProbeSteps;
    const double estimate = per_step * static_cast<double>(steps * n) /
                            static_cast<double>(std::min(config.workers, n));
    std::ostringstream line;
    line << "estimated runtime: " << std::setprecision(3) << estimate << " s";
    result.log.push_back(line.str());
  }

  std::vector<RealizationOutput> outputs(n);
  parallel_for(n, config.workers, [&](std::size_t r) {
    const RealizationSeeds seeds = RealizationSeeds::derive(config.master_seed, r);
    RealizationOutput& out = outputs[r];
    const auto t0 = Clock::now();
    try {
      switch (config.task.kind) {
        case TaskKind::kMemory:
          memory_capacities(config, r, seeds, obs, out, nullptr);
          break;
        case TaskKind::kMackeyGlass:
          mackey_glass_realization(config, r, seeds, obs, result.series, out);
          break;
        case TaskKind::kSantaFe:
          santa_fe_realization(config, r, seeds, obs, result.series, out);
          break;
        case TaskKind::kBlp:
          blp_realization(config, r, seeds, out);
          break;
        case TaskKind::kDecay:
          decay_realization(config, r, seeds, obs, out);
          break;
      }
    } catch (const Error& e) {
      const std::string msg = "realization " + std::to_string(r) + ": " + e.what();
      if (!config.skip_failures) throw Error(e.kind(), msg);
      out.records.clear();
      out.has_trajectory = false;
      out.failure = msg;
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    for (RunRecord& rec : out.records) rec.wall_time = wall;
    out.log.push_back("realization " + std::to_string(r) + " seed " +
                      std::to_string(seeds.realization) + " wall_time " +
                      format_double(wall) + " s");
  });

  for (RealizationOutput& out : outputs) {
    for (RunRecord& rec : out.records) result.records.push_back(std::move(rec));
    for (std::string& line : out.log) result.log.push_back(std::move(line));
    if (out.has_trajectory) result.trajectories.push_back(std::move(out.trajectory));
    if (!out.failure.empty()) {
      result.failures.push_back(out.failure);
      result.log.push_back("FAILED " + out.failure);
    }
  }
  result.summary = summarize(result.records);
  return result;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_outputs(const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());

  open_out(dir / "config.resolved") << to_json(result.config).dump(2) << '\n';

  {
    auto out = open_out(dir / "records.csv");
    out << "realization,seed,metric,value,condition_number\n";
    for (const RunRecord& r : result.records) {
      out << r.realization << ',' << r.seed << ',' << r.metric << ',' << r.value
          << ',' << r.condition_number << '\n';
    }
  }
  {
    auto out = open_out(dir / "summary.csv");
    out << "metric,mean,std,count\n";
    for (const MetricSummary& s : result.summary) {
      out << s.metric << ',' << s.mean << ',' << s.stddev << ',' << s.count << '\n';
    }
  }
  {
    auto out = open_out(dir / "log.txt");
    for (const std::string& line : result.log) out << line << '\n';
  }
  if (!result.trajectories.empty()) {
    auto out = open_out(dir / "trajectories.csv");
    out << "realization,step,truth,prediction\n";
    for (const Trajectory& t : result.trajectories) {
      for (std::size_t k = 0; k < t.predictions.size(); ++k) {
        out << t.realization << ',' << k << ',' << t.truth[k] << ','
            << t.predictions[k] << '\n';
      }
    }
  }
  if (result.has_series) write_series_csv(dir / "series.csv", result.series);
  if (result.config.task.kind == TaskKind::kBlp) {
    BlpResult blp;
    blp.per_pair_sums = result.values("blp_sum");
    blp.n_pairs = blp.per_pair_sums.size();
    blp.n_steps = result.config.task.blp_steps;
    if (!blp.per_pair_sums.empty()) {
      blp.measure = *std::max_element(blp.per_pair_sums.begin(),
                                      blp.per_pair_sums.end());
    }
    write_blp_csv(dir / "blp.csv", {{result.config.model.omega, blp}});
  }
}

SweepResult sweep(const ExperimentConfig& config, const std::string& parameter,
                  const std::vector<double>& values) {
  config_check(!values.empty(), "sweep", "empty value list");
  json base = to_json(config);
  // Resolve the dotted path once to reject unknown parameters early.
  std::vector<std::string> parts;
  {
    std::stringstream ss(parameter);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
  }
  config_check(!parts.empty(), "sweep", "empty parameter name");
  json* slot = &base;
  for (const std::string& part : parts) {
    config_check(slot->is_object() && slot->contains(part), parameter,
                 "unknown sweep parameter");
    slot = &(*slot)[part];
  }
  config_check(slot->is_number(), parameter, "sweep parameter is not numeric");
  const bool integral = slot->is_number_integer();

  SweepResult out{parameter, values, {}};
  for (double v : values) {
    json j = base;
    json* target = &j;
    for (const std::string& part : parts) target = &(*target)[part];
    if (integral) {
      config_check(v >= 0 && std::floor(v) == v, parameter,
                   "value " + format_double(v) + " is not a non-negative integer");
      *target = static_cast<std::uint64_t>(v);
    } else {
      *target = v;
    }
    out.runs.push_back(run_experiment(config_from_json(j)));
  }
  return out;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "param,value,realization,metric,metric_value\n";
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    for (const RunRecord& r : result.runs[i].records) {
      out << result.parameter << ',' << result.values[i] << ',' << r.realization
          << ',' << r.metric << ',' << r.value << '\n';
    }
  }
}

}  // namespace qrc
