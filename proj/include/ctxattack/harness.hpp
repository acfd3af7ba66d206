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

#ifndef CTXATTACK_HARNESS_HPP_
#define CTXATTACK_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctxattack/backends.hpp"
#include "ctxattack/config.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/search.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

// ---------------------------------------------------------------------------
// Datasets

enum class AttackField { text, premise, hypothesis };

inline AttackField parse_attack_field(std::string_view s) {
  if (s == "text") return AttackField::text;
  if (s == "premise") return AttackField::premise;
  if (s == "hypothesis") return AttackField::hypothesis;
  throw ConfigError("unknown attack field '" + std::string(s) + "'");
}

enum class DatasetFormat { jsonl, csv };

inline DatasetFormat parse_format(std::string_view s) {
  if (s == "jsonl") return DatasetFormat::jsonl;
  if (s == "csv") return DatasetFormat::csv;
  throw DatasetError("unknown dataset format '" + std::string(s) + "'");
}

struct DatasetRecord {
  std::string id;
  std::string text;  // classification input
  std::optional<std::string> premise;
  std::optional<std::string> hypothesis;
  Label label;
  AttackField attack_field = AttackField::text;

  const std::string& attacked() const {
    switch (attack_field) {
      case AttackField::premise: return *premise;
      case AttackField::hypothesis: return *hypothesis;
      case AttackField::text: break;
    }
    return text;
  }

  // The other half of a sentence pair, in reading order.
  std::optional<Companion> companion() const {
    if (attack_field == AttackField::premise) return Companion{*hypothesis, false};
    if (attack_field == AttackField::hypothesis) return Companion{*premise, true};
    return std::nullopt;
  }

  TokenizedText to_text(const Tokenizer& tokenizer = default_tokenizer()) const {
    TokenizedText t = tokenizer(attacked());
    if (auto c = companion()) t = t.with_companion(std::move(*c));
    return t;
  }
};

struct DatasetSchema {
  std::string id_key = "id";
  std::string text_key = "text";
  std::string premise_key = "premise";
  std::string hypothesis_key = "hypothesis";
  std::string label_key = "label";
  AttackField attack_field = AttackField::text;
};

struct LoadReport {
  std::vector<DatasetRecord> records;
  std::vector<std::string> errors;  // "line N: why", for skipped rows
};

namespace harness_detail {

// Fields of one row, as strings or JSON values.
using Row = std::map<std::string, nlohmann::json>;

inline std::string trim(std::string_view s) { return normalize_whitespace(s); }

inline DatasetRecord record_from_row(const Row& row, const DatasetSchema& schema,
                                     std::size_t line) {
  auto field = [&](const std::string& key) -> std::optional<std::string> {
    auto it = row.find(key);
    if (it == row.end() || it->second.is_null()) return std::nullopt;
    if (!it->second.is_string()) throw DatasetError("field '" + key + "' is not a string");
    return it->second.get<std::string>();
  };
  auto required = [&](const std::string& key) {
    auto v = field(key);
    if (!v || trim(*v).empty()) throw DatasetError("missing or empty field '" + key + "'");
    return *v;
  };

  DatasetRecord rec;
  rec.attack_field = schema.attack_field;
  auto id_it = row.find(schema.id_key);
  if (id_it != row.end() && !id_it->second.is_null()) {
    rec.id = id_it->second.is_string() ? id_it->second.get<std::string>() : id_it->second.dump();
  } else {
    rec.id = "line-" + std::to_string(line);
  }
  if (schema.attack_field == AttackField::text) {
    rec.text = required(schema.text_key);
  } else {
    rec.premise = required(schema.premise_key);
    rec.hypothesis = required(schema.hypothesis_key);
  }

  auto label_it = row.find(schema.label_key);
  if (label_it == row.end() || label_it->second.is_null()) {
    throw DatasetError("missing field '" + schema.label_key + "'");
  }
  const nlohmann::json& lv = label_it->second;
  long long id = -1;
  if (lv.is_number_integer()) {
    id = lv.get<long long>();
  } else if (lv.is_string()) {
    const std::string s = trim(lv.get<std::string>());
    std::size_t used = 0;
    try {
      id = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw DatasetError("label '" + s + "' is not an integer");
  } else {
    throw DatasetError("label is not an integer");
  }
  if (id < 0) throw DatasetError("label must be non-negative");
  rec.label.id = static_cast<std::size_t>(id);
  return rec;
}

// RFC 4180 records: quoted fields may hold commas, doubled quotes and
// newlines. Each record is returned with the line it starts on.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false, any = false;
  std::size_t line = 1, start_line = 1;
  auto end_record = [&] {
    if (any || !cur.empty() || !fields.empty()) {
      fields.push_back(cur);
      out.emplace_back(start_line, std::move(fields));
    }
    fields.clear();
    cur.clear();
    any = false;
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      end_record();
      ++line;
      start_line = line;
    } else {
      cur.push_back(c);
      any = true;
    }
  }
  if (quoted) throw DatasetError("line " + std::to_string(start_line) + ": unterminated quote");
  end_record();
  return out;
}

}  // namespace harness_detail

// Reads and validates a dataset. A bad row is fatal unless `lenient`, in
// which case it is skipped and reported with its line number.
inline LoadReport load_dataset(const std::string& path, DatasetFormat format,
                               const DatasetSchema& schema = {}, bool lenient = false) {
  using harness_detail::Row;
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset " + path);

  LoadReport report;
  auto reject = [&](std::size_t line, const std::string& why) {
    std::string msg = path + ":" + std::to_string(line) + ": " + why;
    if (!lenient) throw DatasetError(msg);
    report.errors.push_back(std::move(msg));
  };
  auto accept = [&](const Row& row, std::size_t line) {
    try {
      report.records.push_back(harness_detail::record_from_row(row, schema, line));
    } catch (const DatasetError& e) {
      reject(line, e.what());
    }
  };

  if (format == DatasetFormat::jsonl) {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (harness_detail::trim(raw).empty()) continue;
      nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        reject(line, "not a JSON object");
        continue;
      }
      Row row;
      for (const auto& [k, v] : j.items()) row[k] = v;
      accept(row, line);
    }
  } else {
    auto rows = harness_detail::parse_csv(in);
    if (rows.empty()) throw DatasetError("dataset " + path + " is empty");
    const std::vector<std::string> header = rows.front().second;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& [line, cells] = rows[r];
      if (cells.size() != header.size()) {
        reject(line, "expected " + std::to_string(header.size()) + " fields, found " +
                         std::to_string(cells.size()));
        continue;
      }
      Row row;
      for (std::size_t c = 0; c < header.size(); ++c) {
        row[header[c]] = cells[c].empty() ? nlohmann::json(nullptr) : nlohmann::json(cells[c]);
      }
      accept(row, line);
    }
  }
  if (report.records.empty()) throw DatasetError("dataset " + path + " has no valid records");
  return report;
}

// ---------------------------------------------------------------------------
// Running attacks and computing metrics

struct SampleResult {
  std::size_t repetition = 0;
  std::size_t dataset_index = 0;
  std::string id;
  Label label;
  TokenizedText original;
  AttackResult result;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for fewer than two values
  std::size_t n = 0;
};

inline MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

// Metrics of one repetition. Accuracies are percentages, asp is a fraction.
// Errored samples are excluded from every denominator.
struct RepetitionMetrics {
  std::size_t total = 0;  // non-errored samples
  std::map<std::string, std::size_t> status_counts;
  double original_acc = 0.0;
  double after_attack_acc = 0.0;
  double asp = 0.0;
  std::optional<double> avg_perturb_pct;   // over successes
  std::optional<double> avg_semantic_sim;  // over successes
  std::optional<double> avg_queries;       // over attacked (non-skipped) samples
};

struct RunMetrics {
  std::size_t repetitions = 0;
  MeanStd original_acc;
  MeanStd after_attack_acc;
  MeanStd avg_perturb_pct;
  MeanStd avg_queries;
  MeanStd avg_semantic_sim;
  MeanStd asp;
  std::map<std::string, std::size_t> status_counts;  // summed over repetitions
  std::vector<RepetitionMetrics> per_repetition;
};

inline RepetitionMetrics repetition_metrics(std::span<const SampleResult> samples) {
  RepetitionMetrics m;
  std::size_t correct = 0, still_correct = 0, successes = 0, attacked = 0;
  double perturb = 0.0, sim = 0.0, queries = 0.0;
  for (const SampleResult& s : samples) {
    const AttackResult& r = s.result;
    ++m.status_counts[std::string(to_string(r.status))];
    if (r.status == AttackStatus::errored) continue;
    ++m.total;
    if (r.status == AttackStatus::skipped_misclassified) continue;
    ++correct;
    ++attacked;
    queries += static_cast<double>(r.queries);
    if (r.status == AttackStatus::success) {
      ++successes;
      perturb += r.perturbation_pct;
      sim += r.semantic_similarity;
    } else {
      ++still_correct;
    }
  }
  if (m.total > 0) {
    m.original_acc = 100.0 * static_cast<double>(correct) / static_cast<double>(m.total);
    m.after_attack_acc = 100.0 * static_cast<double>(still_correct) / static_cast<double>(m.total);
  }
  if (correct > 0) m.asp = static_cast<double>(successes) / static_cast<double>(correct);
  if (successes > 0) {
    m.avg_perturb_pct = perturb / static_cast<double>(successes);
    m.avg_semantic_sim = sim / static_cast<double>(successes);
  }
  if (attacked > 0) m.avg_queries = queries / static_cast<double>(attacked);
  return m;
}

// Groups samples by repetition and reports the mean and standard deviation of
// each metric across repetitions. Averages undefined in a repetition (no
// successes, say) are left out of that metric's mean.
inline RunMetrics compute_metrics(std::span<const SampleResult> samples) {
  std::map<std::size_t, std::vector<SampleResult>> by_rep;
  for (const SampleResult& s : samples) by_rep[s.repetition].push_back(s);

  RunMetrics out;
  out.repetitions = by_rep.size();
  std::vector<double> orig, after, asp, perturb, queries, sim;
  for (const auto& [rep, group] : by_rep) {
    RepetitionMetrics m = repetition_metrics(group);
    orig.push_back(m.original_acc);
    after.push_back(m.after_attack_acc);
    asp.push_back(m.asp);
    if (m.avg_perturb_pct) perturb.push_back(*m.avg_perturb_pct);
    if (m.avg_semantic_sim) sim.push_back(*m.avg_semantic_sim);
    if (m.avg_queries) queries.push_back(*m.avg_queries);
    for (const auto& [k, v] : m.status_counts) out.status_counts[k] += v;
    out.per_repetition.push_back(std::move(m));
  }
  out.original_acc = mean_std(orig);
  out.after_attack_acc = mean_std(after);
  out.asp = mean_std(asp);
  out.avg_perturb_pct = mean_std(perturb);
  out.avg_queries = mean_std(queries);
  out.avg_semantic_sim = mean_std(sim);
  return out;
}

struct RunOptions {
  std::optional<std::size_t> sample_size;  // all records when unset
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;
  std::size_t workers = 1;
  Tokenizer tokenizer = default_tokenizer();
};

struct RunOutput {
  std::vector<SampleResult> samples;  // repetition-major, dataset order within
  RunMetrics metrics;
};

// Dataset indices drawn for one repetition, ascending.
inline std::vector<std::size_t> draw_sample(std::size_t dataset_size, std::size_t sample_size,
                                            std::uint64_t seed, std::size_t repetition) {
  std::vector<std::size_t> idx(dataset_size);
  std::iota(idx.begin(), idx.end(), 0);
  if (sample_size >= dataset_size) return idx;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(repetition)};
  std::mt19937_64 rng(seq);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(sample_size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Attacks `sample_size` seeded random records per repetition on a bounded
// worker pool. A sample whose text cannot be tokenized, or whose backends
// fail, is recorded with status errored.
inline RunOutput run_attacks(const std::vector<DatasetRecord>& dataset, const AttackConfig& cfg,
                             const BackendSuite& backends, const RunOptions& options = {}) {
  cfg.validate();
  if (!backends.complete()) throw ConfigError("backend suite is incomplete");
  if (dataset.empty()) throw DatasetError("dataset is empty");
  const std::size_t n = options.sample_size.value_or(dataset.size());
  if (n > dataset.size()) {
    throw ConfigError("sample_size " + std::to_string(n) + " exceeds dataset size " +
                      std::to_string(dataset.size()));
  }
  if (options.repetitions < 1) throw ConfigError("repetitions must be >= 1");

  RunOutput out;
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    for (std::size_t i : draw_sample(dataset.size(), n, options.seed, rep)) {
      SampleResult s;
      s.repetition = rep;
      s.dataset_index = i;
      s.id = dataset[i].id;
      s.label = dataset[i].label;
      out.samples.push_back(std::move(s));
    }
  }

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, out.samples.size());
  const BackendSuite suite = workers > 1 ? serialize_non_reentrant(backends) : backends;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < out.samples.size(); k = next++) {
      SampleResult& s = out.samples[k];
      try {
        s.original = dataset[s.dataset_index].to_text(options.tokenizer);
      } catch (const Error& e) {
        s.result.status = AttackStatus::errored;
        s.result.error = e.what();
        continue;
      }
      try {
        s.result = attack(s.original, s.label, cfg, suite);
      } catch (const Error& e) {
        s.result = AttackResult{};
        s.result.adversarial = s.original;
        s.result.status = AttackStatus::errored;
        s.result.error = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  out.metrics = compute_metrics(out.samples);
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { K, window, M, N, lambda, heuristic };

inline SweepAxis parse_axis(std::string_view s) {
  if (s == "K") return SweepAxis::K;
  if (s == "window") return SweepAxis::window;
  if (s == "M") return SweepAxis::M;
  if (s == "N") return SweepAxis::N;
  if (s == "lambda") return SweepAxis::lambda;
  if (s == "heuristic") return SweepAxis::heuristic;
  throw ConfigError("unknown sweep axis '" + std::string(s) +
                    "' (expected K, window, M, N, lambda or heuristic)");
}

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::K: return "K";
    case SweepAxis::window: return "window";
    case SweepAxis::M: return "M";
    case SweepAxis::N: return "N";
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::heuristic: return "heuristic";
  }
  return "?";
}

inline AttackConfig with_axis_value(AttackConfig cfg, SweepAxis axis, const std::string& value) {
  auto as_count = [&] {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw ConfigError("sweep value '" + value + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  };
  switch (axis) {
    case SweepAxis::K: cfg.K = as_count(); break;
    case SweepAxis::window: cfg.window_half = as_count(); break;
    case SweepAxis::M: cfg.M = as_count(); break;
    case SweepAxis::N: cfg.N = as_count(); break;
    case SweepAxis::heuristic: cfg.heuristic = parse_heuristic(value); break;
    case SweepAxis::lambda: {
      std::size_t used = 0;
      try {
        cfg.lambda = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) {
        throw ConfigError("sweep value '" + value + "' is not a number");
      }
      break;
    }
  }
  cfg.validate();
  return cfg;
}

struct SweepRow {
  std::string value;
  AttackConfig config;
  RunOutput output;
};

// One run per value, every run drawing the same seeded samples.
inline std::vector<SweepRow> sweep(const std::vector<DatasetRecord>& dataset,
                                   const AttackConfig& base, SweepAxis axis,
                                   const std::vector<std::string>& values,
                                   const BackendSuite& backends, const RunOptions& options = {}) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<AttackConfig> configs;
  for (const std::string& v : values) configs.push_back(with_axis_value(base, axis, v));
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < values.size(); ++k) {
    rows.push_back({values[k], configs[k], run_attacks(dataset, configs[k], backends, options)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization and reports

inline nlohmann::json to_json(const SampleResult& s) {
  const AttackResult& r = s.result;
  nlohmann::json subs = nlohmann::json::array();
  for (const Substitution& sub : r.substitutions) {
    subs.push_back({{"index", sub.index}, {"original", sub.original}, {"replacement", sub.replacement}});
  }
  nlohmann::json j = {
      {"repetition", s.repetition},
      {"dataset_index", s.dataset_index},
      {"id", s.id},
      {"label", s.label.id},
      {"status", std::string(to_string(r.status))},
      {"original", s.original.detokenize()},
      {"adversarial", r.adversarial.detokenize()},
      {"substitutions", subs},
      {"queries", r.queries},
      {"semantic_similarity", r.semantic_similarity},
      {"perturbation_pct", r.perturbation_pct},
      {"rounds", r.rounds},
      {"found_by", std::string(to_string(r.found_by))},
  };
  if (s.original.companion()) j["companion"] = s.original.companion()->text;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

// Inverse of to_json for the fields metrics depend on. Texts are
// re-tokenized, so they compare equal modulo whitespace.
inline SampleResult sample_result_from_json(const nlohmann::json& j) {
  SampleResult s;
  s.repetition = j.at("repetition").get<std::size_t>();
  s.dataset_index = j.at("dataset_index").get<std::size_t>();
  s.id = j.at("id").get<std::string>();
  s.label.id = j.at("label").get<std::size_t>();
  s.result.status = parse_status(j.at("status").get<std::string>());
  const std::string original = j.at("original").get<std::string>();
  const std::string adversarial = j.at("adversarial").get<std::string>();
  if (!normalize_whitespace(original).empty()) s.original = tokenize(original);
  if (!normalize_whitespace(adversarial).empty()) s.result.adversarial = tokenize(adversarial);
  for (const auto& sub : j.at("substitutions")) {
    s.result.substitutions.push_back({sub.at("index").get<std::size_t>(),
                                      sub.at("original").get<std::string>(),
                                      sub.at("replacement").get<std::string>()});
  }
  s.result.queries = j.at("queries").get<std::size_t>();
  s.result.semantic_similarity = j.at("semantic_similarity").get<double>();
  s.result.perturbation_pct = j.at("perturbation_pct").get<double>();
  s.result.rounds = j.at("rounds").get<std::size_t>();
  s.result.found_by = parse_found_by(j.at("found_by").get<std::string>());
  if (j.contains("error")) s.result.error = j["error"].get<std::string>();
  return s;
}

inline nlohmann::json to_json(const MeanStd& m) {
  return {{"mean", m.mean}, {"std", m.std}, {"n", m.n}};
}

inline nlohmann::json to_json(const RunMetrics& m) {
  nlohmann::json reps = nlohmann::json::array();
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const RepetitionMetrics& r : m.per_repetition) {
    reps.push_back({{"total", r.total},
                    {"status_counts", r.status_counts},
                    {"original_acc", r.original_acc},
                    {"after_attack_acc", r.after_attack_acc},
                    {"asp", r.asp},
                    {"avg_perturb_pct", opt(r.avg_perturb_pct)},
                    {"avg_semantic_sim", opt(r.avg_semantic_sim)},
                    {"avg_queries", opt(r.avg_queries)}});
  }
  return {{"repetitions", m.repetitions},
          {"original_acc", to_json(m.original_acc)},
          {"after_attack_acc", to_json(m.after_attack_acc)},
          {"avg_perturb_pct", to_json(m.avg_perturb_pct)},
          {"avg_queries", to_json(m.avg_queries)},
          {"avg_semantic_sim", to_json(m.avg_semantic_sim)},
          {"asp", to_json(m.asp)},
          {"status_counts", m.status_counts},
          {"per_repetition", reps},
          {"query_accounting", "every target prediction counts as one query, "
                               "including importance masks, single probes and combination probes"}};
}

// "mean (std)" with fixed precision.
inline std::string format_mean_std(const MeanStd& m, int precision, double scale = 1.0) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << m.mean * scale << " ("
     << m.std * scale << ")";
  return os.str();
}

struct ReportRow {
  std::string name;
  RunMetrics metrics;
};

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> kColumns = {
      "Run", "Original Acc", "Attacked Acc", "Perturb %", "Query #", "Semantic Sim", "ASP %"};
  return kColumns;
}

inline std::vector<std::string> report_cells(const ReportRow& row) {
  const RunMetrics& m = row.metrics;
  return {row.name,
          format_mean_std(m.original_acc, 1),
          format_mean_std(m.after_attack_acc, 1),
          format_mean_std(m.avg_perturb_pct, 1),
          format_mean_std(m.avg_queries, 0),
          format_mean_std(m.avg_semantic_sim, 2),
          format_mean_std(m.asp, 1, 100.0)};
}

// Plain-text table; every metric cell reads "mean (std)".
inline std::string render_table(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> cells{report_columns()};
  for (const ReportRow& r : rows) cells.push_back(report_cells(r));
  std::vector<std::size_t> width(report_columns().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream os;
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t c = 0; c < cells[l].size(); ++c) {
      if (c > 0) os << " | ";
      os << cells[l][c] << std::string(width[c] - cells[l][c].size(), ' ');
    }
    os << '\n';
    if (l == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) os << "-+-";
        os << std::string(width[c], '-');
      }
      os << '\n';
    }
  }
  return os.str();
}

inline std::string render_csv(const std::vector<ReportRow>& rows) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  const auto& cols = report_columns();
  os << "run";
  for (std::size_t c = 1; c < cols.size(); ++c) os << ',' << quote(cols[c]) << " mean," << quote(cols[c]) << " std";
  os << '\n';
  auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
  };
  for (const ReportRow& r : rows) {
    const RunMetrics& m = r.metrics;
    os << quote(r.name);
    for (const MeanStd* ms : {&m.original_acc, &m.after_attack_acc, &m.avg_perturb_pct,
                              &m.avg_queries, &m.avg_semantic_sim}) {
      os << ',' << num(ms->mean) << ',' << num(ms->std);
    }
    os << ',' << num(100.0 * m.asp.mean) << ',' << num(100.0 * m.asp.std) << '\n';
  }
  return os.str();
}

namespace harness_detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace harness_detail

inline std::string results_jsonl(const std::vector<SampleResult>& samples) {
  std::string out;
  for (const SampleResult& s : samples) out += to_json(s).dump() + "\n";
  return out;
}

// Writes config.json, results.jsonl, metrics.json, report.txt and report.csv.
inline void write_run_directory(const std::filesystem::path& dir, const nlohmann::json& config,
                                const RunOutput& run, const std::string& name = "run") {
  std::filesystem::create_directories(dir);
  using harness_detail::write_file;
  write_file(dir / "config.json", config.dump(2) + "\n");
  write_file(dir / "results.jsonl", results_jsonl(run.samples));
  write_file(dir / "metrics.json", to_json(run.metrics).dump(2) + "\n");
  const std::vector<ReportRow> rows{{name, run.metrics}};
  write_file(dir / "report.txt", render_table(rows));
  write_file(dir / "report.csv", render_csv(rows));
}

// JSONL of successful attacks only, for augmenting a training set.
inline std::size_t export_adversarial(const std::vector<SampleResult>& samples,
                                      const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::string out;
  std::size_t n = 0;
  for (const SampleResult& s : samples) {
    if (s.result.status != AttackStatus::success) continue;
    nlohmann::json subs = nlohmann::json::array();
    for (const Substitution& sub : s.result.substitutions) {
      subs.push_back({{"index", sub.index}, {"original", sub.original}, {"replacement", sub.replacement}});
    }
    nlohmann::json j = {{"id", s.id},
                        {"original", s.original.detokenize()},
                        {"adversarial", s.result.adversarial.detokenize()},
                        {"label", s.label.id},
                        {"substitutions", subs}};
    if (s.original.companion()) {
      j["companion"] = s.original.companion()->text;
      j["companion_first"] = s.original.companion()->before;
    }
    out += j.dump() + "\n";
    ++n;
  }
  harness_detail::write_file(path, out);
  return n;
}

}  // namespace ctxattack

#endif  // CTXATTACK_HARNESS_HPP_
