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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrc/error.hpp"
#include "qrc/experiments.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> workers;
  std::string out;
  bool skip_failures = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON experiment configuration");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--realizations", o.realizations, "Number of realizations");
  cmd->add_option("--workers", o.workers, "Worker threads");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--skip-failures", o.skip_failures,
                "Log failing realizations and continue");
}

qrc::ExperimentConfig resolve(const CommonOptions& o, qrc::TaskKind task) {
  qrc::ExperimentConfig c;
  if (!o.config.empty()) c = qrc::load_config(o.config);
  c.task.kind = task;
  if (task == qrc::TaskKind::kMemory && c.task.stm_delays.empty() &&
      c.task.monomials.empty()) {
    for (std::size_t tau = 0; tau <= 20; ++tau) c.task.stm_delays.push_back(tau);
  }
  if (o.seed) c.master_seed = *o.seed;
  if (o.realizations) c.realizations = *o.realizations;
  if (o.workers) c.workers = *o.workers;
  if (!o.out.empty()) c.output_path = o.out;
  if (o.skip_failures) c.skip_failures = true;
  if (c.output_path.empty()) c.output_path = "out";
  c.validate();
  return c;
}

void print_summary(const qrc::ExperimentResult& r) {
  for (const std::string& line : r.log) {
    if (line.rfind("estimated runtime", 0) == 0) std::cerr << line << '\n';
  }
  std::cout << "metric,mean,std,count\n";
  for (const auto& s : r.summary) {
    std::cout << s.metric << ',' << s.mean << ',' << s.stddev << ',' << s.count
              << '\n';
  }
  for (const std::string& f : r.failures) std::cerr << "skipped " << f << '\n';
}

int run(const CommonOptions& o, qrc::TaskKind task) {
  const qrc::ExperimentConfig c = resolve(o, task);
  const qrc::ExperimentResult r = qrc::run_experiment(c);
  qrc::write_outputs(r, c.output_path);
  print_summary(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir computing experiments"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    qrc::TaskKind task;
  };
  const Command commands[] = {
      {"run-stm", "Short-term memory capacities", qrc::TaskKind::kMemory},
      {"run-monomial", "Monomial memory capacities", qrc::TaskKind::kMemory},
      {"run-mg", "Mackey-Glass closed-loop forecast", qrc::TaskKind::kMackeyGlass},
      {"run-santafe", "Santa Fe multi-step forecast", qrc::TaskKind::kSantaFe},
      {"run-blp", "Trace-distance non-Markovianity sums", qrc::TaskKind::kBlp},
      {"run-decay", "Memory decay bound", qrc::TaskKind::kDecay},
  };
  std::vector<CommonOptions> options(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].help);
    add_common(sub, options[i]);
    subs.push_back(sub);
  }

  CommonOptions sweep_opts;
  std::string task_name = "memory";
  std::string param;
  std::vector<double> values;
  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per value");
  add_common(sweep, sweep_opts);
  sweep->add_option("--task", task_name, "memory|mackey_glass|santa_fe|blp|decay");
  sweep->add_option("--param", param, "Dotted config path, e.g. model.lambda")
      ->required();
  sweep->add_option("--values", values, "Values to sweep")->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run(options[i], commands[i].task);
    }
    if (sweep->parsed()) {
      const std::pair<const char*, qrc::TaskKind> tasks[] = {
          {"memory", qrc::TaskKind::kMemory},
          {"mackey_glass", qrc::TaskKind::kMackeyGlass},
          {"santa_fe", qrc::TaskKind::kSantaFe},
          {"blp", qrc::TaskKind::kBlp},
          {"decay", qrc::TaskKind::kDecay}};
      std::optional<qrc::TaskKind> kind;
      for (const auto& [name, k] : tasks) {
        if (task_name == name) kind = k;
      }
      if (!kind) qrc::fail(qrc::ErrorKind::kConfig, "--task: unknown task " + task_name);
      const qrc::ExperimentConfig c = resolve(sweep_opts, *kind);
      const qrc::SweepResult result = qrc::sweep(c, param, values);
      const std::filesystem::path root = c.output_path;
      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        qrc::write_outputs(result.runs[i], root / ("value_" + std::to_string(i)));
      }
      qrc::write_sweep_csv(result, root / "sweep.csv");
      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        std::cout << "# " << param << " = " << result.values[i] << '\n';
        print_summary(result.runs[i]);
      }
    }
  } catch (const qrc::Error& e) {
    std::cerr << qrc::error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return qrc::error_kind_exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
