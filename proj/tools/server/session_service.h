// Copyright 2026 The Flowfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWFIRE_TOOLS_SERVER_SESSION_SERVICE_H_
#define FLOWFIRE_TOOLS_SERVER_SESSION_SERVICE_H_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "flowfire/engine.h"

namespace flowfire::server {

using nlohmann::json;

// Carries the HTTP status the transport should answer with.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Monitors autorun records for a session started from `initial`: vertex
// imbalance for edge rules, the face-level monitors whenever the face view
// exists, and the pulse monitors when `initial` is a bare pulse on the hole.
unsigned autorun_monitors(const Rules& rules, const State& initial);

// Interactive firing sessions, independent of any transport. Every method
// returns a JSON body or throws ServiceError (404 unknown session, 409 stale
// version or empty undo stack, 422 invalid input). Requests against one
// session are serialized; distinct sessions proceed concurrently.
class SessionService {
 public:
  // With a directory, each session's initial state and move log are written
  // there after every change, and recover() replays them.
  explicit SessionService(
      std::optional<std::filesystem::path> persist_dir = std::nullopt);
  ~SessionService();

  // {"complex":{...},"config":{...},"rules":{"hole":bool,
  //  "holeRule":"standard"}} -> snapshot with "id".
  json create(const json& body);
  json state(const std::string& id);
  json moves(const std::string& id);
  // {"version":n,"moveIndex":i}
  json fire(const std::string& id, const json& body);
  json undo(const std::string& id);
  // {"strategy":"random","seed":7,"maxSteps":1000} ->
  // {"report":{...},"snapshot":{...}}. `progress` receives the step count
  // every `progress_every` moves.
  json autorun(const std::string& id, const json& body,
               const std::function<void(std::uint64_t)>& progress = {},
               std::uint64_t progress_every = 1000);
  json predict(const std::string& id);
  // Rendered drawing of the current state.
  std::string render(const std::string& id, const std::string& format,
                     const std::optional<std::string>& window);

  // Loads every persisted session; returns how many were restored.
  std::size_t recover();
  std::size_t size() const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  json snapshot(const Session& session, const json* before) const;
  void persist(const Session& session) const;
  std::shared_ptr<Session> build(const json& description) const;

  std::optional<std::filesystem::path> persist_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace flowfire::server

#endif  // FLOWFIRE_TOOLS_SERVER_SESSION_SERVICE_H_
