/* Copyright 2026 The ctxattack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end: attack a dataset, sweep one hyperparameter, or
// attack a single sentence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctxattack/ctxattack.hpp"

namespace fs = std::filesystem;
using namespace ctxattack;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flags shared by every subcommand. Unset flags leave the config file (or
// built-in default) value alone.
struct Overrides {
  std::string config_path;
  std::string format, attack_field, backend_suite, target_url, out;
  std::size_t sample_size = 0, repetitions = 0, workers = 0, query_budget = 0, max_rounds = 0;
  std::uint64_t seed = 0;

  CLI::Option* sample_size_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* repetitions_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* query_budget_opt = nullptr;
  CLI::Option* max_rounds_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* attack_field_opt = nullptr;
  CLI::Option* backend_suite_opt = nullptr;
  CLI::Option* target_url_opt = nullptr;
  CLI::Option* out_opt = nullptr;

  void attach(CLI::App* app, bool dataset_flags) {
    app->add_option("--config", config_path, "JSON config file (AttackConfig field names)");
    backend_suite_opt = app->add_option(
        "--backend-suite", backend_suite, "'stub' (built-in demo) or 'stub:<suite.json>'");
    target_url_opt = app->add_option("--target-url", target_url,
                                     "remote target endpoint, e.g. http://host:8080/predict");
    query_budget_opt = app->add_option("--query-budget", query_budget, "hard cap on target queries per sample");
    max_rounds_opt = app->add_option("--max-rounds", max_rounds, "replacement rounds per sample");
    if (!dataset_flags) return;
    format_opt = app->add_option("--format", format, "jsonl or csv");
    attack_field_opt = app->add_option("--attack-field", attack_field, "text, premise or hypothesis");
    sample_size_opt = app->add_option("--sample-size", sample_size, "records drawn per repetition");
    seed_opt = app->add_option("--seed", seed, "sampling seed");
    repetitions_opt = app->add_option("--repetitions", repetitions, "independent repetitions");
    workers_opt = app->add_option("--workers", workers, "concurrent attack workers");
    out_opt = app->add_option("--out", out, "run directory");
  }

  EffectiveConfig resolve() const {
    EffectiveConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    auto set = [](CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
    if (set(backend_suite_opt)) cfg.run.backend_suite = backend_suite;
    if (set(target_url_opt)) cfg.run.target_url = target_url;
    if (set(query_budget_opt)) cfg.attack.query_budget = query_budget;
    if (set(max_rounds_opt)) cfg.attack.max_rounds = max_rounds;
    if (set(format_opt)) cfg.run.format = format;
    if (set(attack_field_opt)) cfg.run.attack_field = attack_field;
    if (set(sample_size_opt)) cfg.run.sample_size = sample_size;
    if (set(seed_opt)) cfg.run.seed = seed;
    if (set(repetitions_opt)) cfg.run.repetitions = repetitions;
    if (set(workers_opt)) cfg.run.workers = workers;
    if (set(out_opt)) cfg.run.out = out;
    if (cfg.run.target_url.empty()) {
      if (const char* env = std::getenv(kTargetUrlEnv)) cfg.run.target_url = env;
    }
    cfg.attack.validate();
    return cfg;
  }
};

BackendSuite resolve_backends(const RunSettings& run) {
  BackendSuite suite;
  const std::string& name = run.backend_suite;
  if (name == "stub") {
    suite = demo_stub_suite();
  } else if (name.rfind("stub:", 0) == 0) {
    suite = load_stub_suite(name.substr(5));
  } else {
    throw ConfigError("unknown backend suite '" + name + "' (expected stub or stub:<file>)");
  }
  if (!run.target_url.empty()) {
    RemoteTargetOptions opts = remote_options_from_env();
    opts.url = run.target_url;
    suite.target = std::make_shared<RemoteTarget>(opts);
  }
  return suite;
}

std::vector<DatasetRecord> load_records(const std::string& path, const RunSettings& run,
                                        bool lenient) {
  if (!fs::is_regular_file(path)) throw DatasetError("dataset " + path + " does not exist");
  DatasetSchema schema;
  schema.attack_field = parse_attack_field(run.attack_field);
  LoadReport report = load_dataset(path, parse_format(run.format), schema, lenient);
  for (const std::string& e : report.errors) std::cerr << "skipped " << e << "\n";
  return std::move(report.records);
}

RunOptions run_options(const RunSettings& run) {
  RunOptions o;
  o.sample_size = run.sample_size;
  o.seed = run.seed;
  o.repetitions = run.repetitions;
  o.workers = run.workers;
  return o;
}

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = normalize_whitespace(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Marks substituted words with **...**.
std::string highlight(const TokenizedText& text, const std::vector<Substitution>& subs) {
  TokenizedText marked = text;
  for (const Substitution& s : subs) marked = marked.with_word(s.index, "**" + text.word(s.index) + "**");
  return marked.detokenize();
}

int cmd_attack(const Overrides& flags, const std::string& dataset_path, bool lenient) {
  EffectiveConfig cfg = flags.resolve();
  auto records = load_records(dataset_path, cfg.run, lenient);
  BackendSuite backends = resolve_backends(cfg.run);
  RunOutput run = run_attacks(records, cfg.attack, backends, run_options(cfg.run));
  const fs::path dir(cfg.run.out);
  write_run_directory(dir, to_json(cfg), run);
  export_adversarial(run.samples, dir / "adversarial.jsonl");
  std::cout << render_table({{"attack", run.metrics}});
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_sweep(const Overrides& flags, const std::string& dataset_path, bool lenient,
              const std::string& axis_name, const std::string& values_csv) {
  EffectiveConfig cfg = flags.resolve();
  const SweepAxis axis = parse_axis(axis_name);
  const std::vector<std::string> values = split_values(values_csv);
  if (values.empty()) throw ConfigError("--values is empty");
  for (const std::string& v : values) with_axis_value(cfg.attack, axis, v);
  auto records = load_records(dataset_path, cfg.run, lenient);
  BackendSuite backends = resolve_backends(cfg.run);

  const std::vector<SweepRow> rows =
      sweep(records, cfg.attack, axis, values, backends, run_options(cfg.run));
  const fs::path root(cfg.run.out);
  std::vector<ReportRow> table;
  for (const SweepRow& row : rows) {
    EffectiveConfig sub = cfg;
    sub.attack = row.config;
    const std::string name = std::string(to_string(axis)) + "=" + row.value;
    sub.run.out = (root / name).string();
    write_run_directory(root / name, to_json(sub), row.output, name);
    table.push_back({name, row.output.metrics});
  }
  std::ofstream(root / "comparison.txt") << render_table(table);
  std::ofstream(root / "comparison.csv") << render_csv(table);
  std::ofstream(root / "config.json") << to_json(cfg).dump(2) << "\n";
  std::cout << render_table(table);
  std::cout << "sweep directory: " << root.string() << "\n";
  return 0;
}

int cmd_single(const Overrides& flags, const std::string& text, std::size_t label) {
  if (normalize_whitespace(text).empty()) throw ConfigError("--text is empty");
  EffectiveConfig cfg = flags.resolve();
  BackendSuite backends = resolve_backends(cfg.run);
  const TokenizedText original = tokenize(text);
  const AttackResult r = attack(original, Label{label, std::nullopt}, cfg.attack, backends);

  std::cout << "original:    " << highlight(original, r.substitutions) << "\n";
  std::cout << "adversarial: " << highlight(r.adversarial, r.substitutions) << "\n";
  std::cout << "status:      " << to_string(r.status);
  if (r.status == AttackStatus::success) {
    std::cout << " (round " << r.rounds << ", " << to_string(r.found_by) << " stage)";
  } else if (r.status == AttackStatus::failed || r.status == AttackStatus::budget_exhausted) {
    std::cout << " (adversarial line shows the best-gap text)";
  }
  std::cout << "\n";
  for (const Substitution& s : r.substitutions) {
    std::cout << "  [" << s.index << "] " << s.original << " -> " << s.replacement << "\n";
  }
  std::cout << "queries:     " << r.queries << "\n";
  std::cout << "similarity:  " << r.semantic_similarity << "\n";
  std::cout << "perturbed:   " << r.perturbation_pct << "%\n";
  if (!r.error.empty()) std::cout << "error:       " << r.error << "\n";
  return r.status == AttackStatus::errored ? kExitRuntime : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box word-substitution attacks on text classifiers"};
  app.require_subcommand(1);

  Overrides attack_flags, sweep_flags, single_flags;
  std::string dataset, axis, values, text;
  std::size_t label = 0;
  bool lenient = false;

  CLI::App* attack_cmd = app.add_subcommand("attack", "attack every sampled record of a dataset");
  attack_flags.attach(attack_cmd, true);
  attack_cmd->add_option("--dataset", dataset, "dataset file")->required();
  attack_cmd->add_flag("--lenient", lenient, "skip malformed rows instead of failing");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "repeat a run over values of one hyperparameter");
  sweep_flags.attach(sweep_cmd, true);
  sweep_cmd->add_option("--dataset", dataset, "dataset file")->required();
  sweep_cmd->add_option("--axis", axis, "K, window, M, N, lambda or heuristic")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();
  sweep_cmd->add_flag("--lenient", lenient, "skip malformed rows instead of failing");

  CLI::App* single_cmd = app.add_subcommand("single", "attack one sentence and show the diff");
  single_flags.attach(single_cmd, false);
  single_cmd->add_option("--text", text, "input sentence")->required();
  single_cmd->add_option("--label", label, "truth label index")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*attack_cmd) return cmd_attack(attack_flags, dataset, lenient);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, dataset, lenient, axis, values);
    if (*single_cmd) return cmd_single(single_flags, text, label);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
