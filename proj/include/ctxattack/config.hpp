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

#ifndef CTXATTACK_CONFIG_HPP_
#define CTXATTACK_CONFIG_HPP_

// Config files are flat JSON objects whose keys are the AttackConfig and
// RunSettings field names. Unknown keys are rejected.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"

namespace ctxattack {

struct RunSettings {
  std::string format = "jsonl";
  std::string attack_field = "text";
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;
  std::size_t workers = 1;
  std::string backend_suite = "stub";
  std::string target_url;
  std::string out = "runs/latest";

  bool operator==(const RunSettings&) const = default;
};

struct EffectiveConfig {
  AttackConfig attack;
  RunSettings run;
};

namespace config_detail {

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError("");
      }
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    }
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    }
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("invalid value for '" + key + "': " + v.dump());
  }
}

}  // namespace config_detail

// Applies the keys of `j` on top of `base`. Throws ConfigError naming the
// first unknown key or badly typed value.
inline EffectiveConfig apply_config_json(const nlohmann::json& j, EffectiveConfig base = {}) {
  using config_detail::get_as;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  AttackConfig& a = base.attack;
  RunSettings& r = base.run;
  for (const auto& [key, v] : j.items()) {
    if (key == "K") a.K = get_as<std::size_t>(v, key);
    else if (key == "window_half") a.window_half = get_as<std::size_t>(v, key);
    else if (key == "M") a.M = get_as<std::size_t>(v, key);
    else if (key == "N") a.N = get_as<std::size_t>(v, key);
    else if (key == "lambda") a.lambda = get_as<double>(v, key);
    else if (key == "topn_rank") a.topn_rank = get_as<std::size_t>(v, key);
    else if (key == "heuristic") a.heuristic = parse_heuristic(get_as<std::string>(v, key));
    else if (key == "semantic_floor") a.semantic_floor = get_as<double>(v, key);
    else if (key == "syntactic_floor") a.syntactic_floor = get_as<double>(v, key);
    else if (key == "max_rounds") a.max_rounds = get_as<std::size_t>(v, key);
    else if (key == "query_budget") {
      a.query_budget = v.is_null() ? std::nullopt : std::optional(get_as<std::size_t>(v, key));
    }
    else if (key == "reuse_ranking") a.reuse_ranking = get_as<bool>(v, key);
    else if (key == "exclude_stopwords") a.exclude_stopwords = get_as<bool>(v, key);
    else if (key == "semantic_window") a.semantic_window = get_as<std::size_t>(v, key);
    else if (key == "format") r.format = get_as<std::string>(v, key);
    else if (key == "attack_field") r.attack_field = get_as<std::string>(v, key);
    else if (key == "sample_size") {
      r.sample_size = v.is_null() ? std::nullopt : std::optional(get_as<std::size_t>(v, key));
    }
    else if (key == "seed") r.seed = get_as<std::uint64_t>(v, key);
    else if (key == "repetitions") r.repetitions = get_as<std::size_t>(v, key);
    else if (key == "workers") r.workers = get_as<std::size_t>(v, key);
    else if (key == "backend_suite") r.backend_suite = get_as<std::string>(v, key);
    else if (key == "target_url") r.target_url = get_as<std::string>(v, key);
    else if (key == "out") r.out = get_as<std::string>(v, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return base;
}

inline EffectiveConfig load_config_file(const std::string& path, EffectiveConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return apply_config_json(j, std::move(base));
}

inline nlohmann::json to_json(const AttackConfig& a) {
  nlohmann::json j = {
      {"K", a.K},
      {"window_half", a.window_half},
      {"M", a.M},
      {"N", a.N},
      {"lambda", a.lambda},
      {"topn_rank", a.topn_rank},
      {"heuristic", std::string(to_string(a.heuristic))},
      {"semantic_floor", a.semantic_floor},
      {"syntactic_floor", a.syntactic_floor},
      {"max_rounds", a.max_rounds},
      {"reuse_ranking", a.reuse_ranking},
      {"exclude_stopwords", a.exclude_stopwords},
      {"semantic_window", a.semantic_window},
  };
  j["query_budget"] = a.query_budget ? nlohmann::json(*a.query_budget) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const EffectiveConfig& c) {
  nlohmann::json j = to_json(c.attack);
  const RunSettings& r = c.run;
  j["format"] = r.format;
  j["attack_field"] = r.attack_field;
  j["sample_size"] = r.sample_size ? nlohmann::json(*r.sample_size) : nlohmann::json(nullptr);
  j["seed"] = r.seed;
  j["repetitions"] = r.repetitions;
  j["workers"] = r.workers;
  j["backend_suite"] = r.backend_suite;
  j["target_url"] = r.target_url;
  j["out"] = r.out;
  return j;
}

}  // namespace ctxattack

#endif  // CTXATTACK_CONFIG_HPP_
