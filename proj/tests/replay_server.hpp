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

#ifndef CTXATTACK_TESTS_REPLAY_SERVER_HPP_
#define CTXATTACK_TESTS_REPLAY_SERVER_HPP_

// Local HTTP fixture for the remote target. Responses are replayed from a
// script in order (the last one repeats); every request is recorded.

#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"

namespace ctxattack::testing {

struct ScriptedResponse {
  int status = 200;
  std::string body;
};

struct RecordedRequest {
  std::string path;
  std::string body;
  httplib::Headers headers;
};

class ReplayServer {
 public:
  explicit ReplayServer(std::deque<ScriptedResponse> script) : script_(std::move(script)) {
    server_.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard<std::mutex> lock(mu_);
      requests_.push_back({req.path, req.body, req.headers});
      const ScriptedResponse r = script_.empty() ? ScriptedResponse{500, ""} : script_.front();
      if (script_.size() > 1) script_.pop_front();
      res.status = r.status;
      res.set_content(r.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ReplayServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string url(const std::string& path = "/predict") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::vector<RecordedRequest> requests() const {
    std::lock_guard<std::mutex> lock(mu_);
    return requests_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::deque<ScriptedResponse> script_;
  std::vector<RecordedRequest> requests_;
};

// A port that refuses connections: bound, then released.
inline int unused_port() {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  return port;
}

}  // namespace ctxattack::testing

#endif  // CTXATTACK_TESTS_REPLAY_SERVER_HPP_
