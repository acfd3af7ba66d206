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

#ifndef CTXATTACK_REMOTE_TARGET_HPP_
#define CTXATTACK_REMOTE_TARGET_HPP_

// HTTP client for a target model served behind a prediction endpoint.
//
// Wire format (JSON, POST <path>):
//   request  {"text": "...", "text_pair": "...", "pair_first": true}
//            (text_pair/pair_first only for sentence-pair inputs)
//   response {"scores": [p0, p1, ...], "label": k}

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "ctxattack/backends.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"

namespace ctxattack {

inline constexpr const char* kTargetUrlEnv = "CTXATTACK_TARGET_URL";
inline constexpr const char* kApiKeyEnv = "CTXATTACK_API_KEY";
inline constexpr const char* kApiKeyHeaderEnv = "CTXATTACK_API_KEY_HEADER";

struct RemoteTargetOptions {
  std::string url;  // e.g. http://127.0.0.1:8080/predict
  std::string api_key;
  std::string api_key_header = "Authorization";
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{10000};
};

// Fills url, api_key and api_key_header from the environment when set.
inline RemoteTargetOptions remote_options_from_env(RemoteTargetOptions base = RemoteTargetOptions()) {
  if (const char* v = std::getenv(kTargetUrlEnv)) base.url = v;
  if (const char* v = std::getenv(kApiKeyEnv)) base.api_key = v;
  if (const char* v = std::getenv(kApiKeyHeaderEnv)) base.api_key_header = v;
  return base;
}

inline nlohmann::json prediction_to_json(const Prediction& p) {
  return {{"scores", p.scores()}, {"label", p.predicted().id}};
}

// Throws ProtocolError on anything but {"scores": [...], "label": k} with
// valid probabilities and k an argmax of the scores.
inline Prediction prediction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("scores") || !j["scores"].is_array()) {
    throw ProtocolError("response lacks a 'scores' array");
  }
  std::vector<double> scores;
  for (const auto& s : j["scores"]) {
    if (!s.is_number()) throw ProtocolError("non-numeric score in response");
    scores.push_back(s.get<double>());
  }
  Prediction p = Prediction::from_scores(std::move(scores));
  if (j.contains("label")) {
    const auto& l = j["label"];
    if (!l.is_number_integer() || l.get<long long>() < 0 ||
        static_cast<std::size_t>(l.get<long long>()) >= p.num_classes()) {
      throw ProtocolError("response label is not a valid class index");
    }
    const auto label = static_cast<std::size_t>(l.get<long long>());
    if (p.scores()[label] < p.scores()[p.predicted().id]) {
      throw ProtocolError("response label disagrees with its scores");
    }
  }
  return p;
}

inline nlohmann::json encode_predict_request(const TokenizedText& text) {
  nlohmann::json body = {{"text", text.detokenize()}};
  if (text.companion()) {
    body["text_pair"] = text.companion()->text;
    body["pair_first"] = text.companion()->before;
  }
  return body;
}

// Splits "http://host:port/path" into the origin and the request path.
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("target url lacks a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/predict"};
  return {url.substr(0, slash), url.substr(slash)};
}

// Not reentrant: the harness serializes calls.
class RemoteTarget : public TargetModel {
 public:
  explicit RemoteTarget(RemoteTargetOptions options) : options_(std::move(options)) {
    if (options_.attempts < 1) throw ConfigError("remote target needs at least one attempt");
    std::tie(origin_, path_) = split_url(options_.url);
  }

  Prediction predict(const TokenizedText& text) override {
    const std::string body = encode_predict_request(text).dump();
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!options_.api_key.empty()) headers.emplace(options_.api_key_header, options_.api_key);

    std::string last_error;
    auto backoff = options_.initial_backoff;
    for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
      auto res = client.Post(path_, headers, body, "application/json");
      if (res && res->status == 200) {
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) throw ProtocolError("response is not valid JSON");
        return prediction_from_json(parsed);
      }
      last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
      if (attempt < options_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    throw TargetUnavailable("target at " + options_.url + " unavailable after " +
                            std::to_string(options_.attempts) + " attempts: " + last_error);
  }

  const RemoteTargetOptions& options() const { return options_; }

 private:
  RemoteTargetOptions options_;
  std::string origin_;
  std::string path_;
};

}  // namespace ctxattack

#endif  // CTXATTACK_REMOTE_TARGET_HPP_
