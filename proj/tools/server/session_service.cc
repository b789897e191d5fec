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

#include "session_service.h"

#include <algorithm>
#include <fstream>
#include <vector>

#include "flowfire/analysis.h"
#include "flowfire/error.h"
#include "flowfire/io.h"
#include "flowfire/render.h"

namespace flowfire::server {

namespace fs = std::filesystem;

struct SessionService::Session {
  std::string id;
  json description;
  Rules rules;
  State initial;
  State current;
  std::vector<Move> log;
  std::uint64_t version = 0;
  std::optional<std::int64_t> pulse_k;
  unsigned monitors = 0;
  std::mutex mutex;
};

namespace {

std::optional<FaceRep> face_view(const Complex& complex, const State& state) {
  if (const auto* faces = std::get_if<FaceRep>(&state)) return *faces;
  try {
    return edges_to_faces(complex, std::get<EdgeFlow>(state));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<EdgeFlow> edge_view(const Complex& complex, const State& state) {
  if (const auto* flow = std::get_if<EdgeFlow>(&state)) return *flow;
  if (!complex.supports_edges()) return std::nullopt;
  return faces_to_edges(complex, std::get<FaceRep>(state));
}

std::optional<std::int64_t> hole_height(const Rules& rules,
                                        const State& state) {
  if (!rules.hole) return std::nullopt;
  auto faces = face_view(*rules.complex, state);
  if (!faces) return std::nullopt;
  return faces->get(*rules.hole);
}

std::uint64_t get_unsigned(const json& body, const char* key,
                           std::optional<std::uint64_t> fallback) {
  if (!body.contains(key)) {
    if (fallback) return *fallback;
    throw ServiceError(422, std::string("missing '") + key + "'");
  }
  const auto& v = body.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ServiceError(422, std::string("'") + key +
                                "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

State replay(const State& initial, const std::vector<Move>& log,
             const Rules& rules) {
  State state = initial;
  for (const auto& m : log) apply_move_in_place(state, m, rules);
  return state;
}

}  // namespace

unsigned autorun_monitors(const Rules& rules, const State& initial) {
  unsigned mask = 0;
  if (rules.representation == Representation::kEdge) mask |= kMonitorImbalance;
  const auto faces = face_view(*rules.complex, initial);
  if (!faces) return mask;
  mask |= kMonitorPhi | kMonitorExtrema | kMonitorChips;
  if (rules.hole) {
    const auto k = faces->get(*rules.hole);
    FaceRep bare;
    bare.set(*rules.hole, k);
    if (k > 0 && *faces == bare) {
      mask |= kMonitorPsi | kMonitorHoleValue | kMonitorLemmaExcess;
    }
  }
  return mask;
}

SessionService::SessionService(std::optional<fs::path> persist_dir)
    : persist_dir_(std::move(persist_dir)) {
  if (persist_dir_) fs::create_directories(*persist_dir_);
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Session> SessionService::build(
    const json& description) const {
  auto session = std::make_shared<Session>();
  try {
    if (!description.is_object()) {
      throw Error(ErrorCode::kParse, "request body must be an object");
    }
    auto complex = std::make_shared<const Complex>(
        io::complex_from_json(description.at("complex")));
    State state = description.contains("config")
                      ? io::state_from_json(description.at("config"))
                      : State{FaceRep{}};
    bool hole = false;
    HoleTransferRule hole_rule = HoleTransferRule::kStandard;
    if (description.contains("rules")) {
      const auto& r = description.at("rules");
      hole = r.value("hole", false);
      if (r.contains("holeRule")) {
        hole_rule = parse_hole_rule(r.at("holeRule").get<std::string>());
      }
    }
    Representation rep = representation_of(state);
    if (description.contains("representation")) {
      rep = parse_representation(description.at("representation").get<std::string>());
    }
    state = to_representation(*complex, state, rep);
    session->rules = Rules::make(complex, rep, hole);
    session->rules.hole_transfer = hole_rule;
    validate_state(state, session->rules);
    session->initial = state;
    session->current = state;
    session->pulse_k = hole_height(session->rules, state);
    session->monitors = autorun_monitors(session->rules, state);
    session->description = description;
  } catch (const Error& e) {
    throw ServiceError(422, std::string(error_code_name(e.code())) + ": " +
                                e.what());
  } catch (const json::exception& e) {
    throw ServiceError(422, std::string("malformed request: ") + e.what());
  }
  return session;
}

json SessionService::create(const json& body) {
  auto session = build(body);
  {
    std::unique_lock lock(sessions_mutex_);
    session->id = "s" + std::to_string(next_id_++);
    sessions_[session->id] = session;
  }
  std::lock_guard guard(session->mutex);
  persist(*session);
  return snapshot(*session, nullptr);
}

std::shared_ptr<SessionService::Session> SessionService::find(
    const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no session " + id);
  return it->second;
}

std::size_t SessionService::size() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

json SessionService::snapshot(const Session& s, const json* before) const {
  const auto& complex = *s.rules.complex;
  json j;
  j["id"] = s.id;
  j["version"] = s.version;
  j["step"] = s.log.size();
  j["canUndo"] = !s.log.empty();
  j["representation"] = std::string(representation_name(s.rules.representation));
  j["state"] = io::state_to_json(s.current);
  const auto faces = face_view(complex, s.current);
  const auto edges = edge_view(complex, s.current);
  j["faces"] = faces ? io::state_to_json(State{*faces}) : json(nullptr);
  j["edges"] = edges ? io::state_to_json(State{*edges}) : json(nullptr);
  const auto legal = legal_moves(s.current, s.rules);
  j["terminal"] = legal.empty();
  j["legalMoveCount"] = legal.size();
  j["hole"] = s.rules.hole ? json(to_string(*s.rules.hole)) : json(nullptr);
  j["pulseK"] = s.pulse_k ? json(*s.pulse_k) : json(nullptr);

  json monitors = json::object();
  if (faces) {
    unsigned mask = kMonitorPhi | kMonitorExtrema | kMonitorChips;
    if (s.monitors & kMonitorPsi) mask |= kMonitorPsi | kMonitorLemmaExcess;
    MonitorStreams m;
    try {
      MonitorSampler(s.rules, mask, s.pulse_k).sample(State{*faces}, m);
      monitors["phi"] = m.phi[0];
      monitors["max"] = m.max_value[0];
      monitors["min"] = m.min_value[0];
      monitors["chips"] = m.chips[0];
      if (!m.psi.empty()) monitors["psi"] = m.psi[0];
      if (!m.lemma_excess.empty()) monitors["lemmaExcess"] = m.lemma_excess[0];
    } catch (const Error&) {
      // A state outside the pulse window has no psi; report what we have.
    }
  }
  if (const auto* flow = std::get_if<EdgeFlow>(&s.current)) {
    monitors["nonzeroImbalances"] = imbalances(complex, *flow).size();
  }
  j["monitors"] = monitors;
  if (before) {
    json delta = json::object();
    for (const auto& [key, value] : monitors.items()) {
      if (before->contains(key)) {
        delta[key] = value.get<std::int64_t>() - before->at(key).get<std::int64_t>();
      }
    }
    j["delta"] = delta;
  }
  return j;
}

json SessionService::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  return snapshot(*s, nullptr);
}

json SessionService::moves(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  const auto legal = legal_moves(s->current, s->rules);
  json list = json::array();
  for (std::size_t i = 0; i < legal.size(); ++i) {
    json m = io::move_to_json(legal[i]);
    m["index"] = i;
    m["label"] = to_string(legal[i]);
    list.push_back(std::move(m));
  }
  return json{{"version", s->version},
              {"terminal", legal.empty()},
              {"moves", std::move(list)}};
}

json SessionService::fire(const std::string& id, const json& body) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  const auto version = get_unsigned(body, "version", std::nullopt);
  const auto index = get_unsigned(body, "moveIndex", std::nullopt);
  if (version != s->version) {
    throw ServiceError(409, "stale version " + std::to_string(version) +
                                "; current is " + std::to_string(s->version));
  }
  const auto legal = legal_moves(s->current, s->rules);
  if (index >= legal.size()) {
    throw ServiceError(422, "move index " + std::to_string(index) +
                                " out of range (" + std::to_string(legal.size()) +
                                " legal moves)");
  }
  const json before = snapshot(*s, nullptr).at("monitors");
  apply_move_in_place(s->current, legal[index], s->rules);
  s->log.push_back(legal[index]);
  ++s->version;
  persist(*s);
  auto out = snapshot(*s, &before);
  out["fired"] = io::move_to_json(legal[index]);
  return out;
}

json SessionService::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  if (s->log.empty()) throw ServiceError(409, "nothing to undo");
  const json before = snapshot(*s, nullptr).at("monitors");
  s->log.pop_back();
  s->current = replay(s->initial, s->log, s->rules);
  ++s->version;
  persist(*s);
  return snapshot(*s, &before);
}

json SessionService::autorun(const std::string& id, const json& body,
                             const std::function<void(std::uint64_t)>& progress,
                             std::uint64_t progress_every) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  if (body.contains("version") &&
      get_unsigned(body, "version", std::nullopt) != s->version) {
    throw ServiceError(409, "stale version");
  }
  StrategyKind kind = StrategyKind::kSeededRandom;
  try {
    if (body.contains("strategy")) {
      kind = parse_strategy(body.at("strategy").get<std::string>());
    }
  } catch (const std::exception& e) {
    throw ServiceError(422, e.what());
  }
  const auto seed = get_unsigned(body, "seed", 0);
  RunOptions options;
  options.step_cap = get_unsigned(body, "maxSteps", 10'000);
  options.monitors = s->monitors;
  options.pulse_k = s->pulse_k;
  if (progress && progress_every > 0) {
    options.on_step = [&](std::uint64_t step, const State&) {
      if (step % progress_every == 0) progress(step);
    };
  }
  RunReport report;
  try {
    report = run(s->current, s->rules, Strategy::make(kind, seed), options);
  } catch (const Error& e) {
    throw ServiceError(422, e.what());
  }
  const json before = snapshot(*s, nullptr).at("monitors");
  s->log.insert(s->log.end(), report.moves.begin(), report.moves.end());
  s->current = report.final_state;
  ++s->version;
  persist(*s);
  return json{{"report", io::report_to_json(report)},
              {"snapshot", snapshot(*s, &before)}};
}

json SessionService::predict(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  if (!s->rules.hole || !s->pulse_k) {
    throw ServiceError(422, "prediction needs hole rules and a pulse height");
  }
  const auto pyramid =
      predict_pyramid(*s->rules.complex, *s->rules.hole, *s->pulse_k);
  const auto faces = face_view(*s->rules.complex, s->current);
  return json{{"k", *s->pulse_k},
              {"hole", to_string(*s->rules.hole)},
              {"pyramid", io::state_to_json(State{pyramid})},
              {"matches", faces && *faces == pyramid},
              {"version", s->version}};
}

std::string SessionService::render(const std::string& id,
                                   const std::string& format,
                                   const std::optional<std::string>& window) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  try {
    std::optional<Window> w;
    if (window) w = parse_window(*window);
    RenderFormat f = RenderFormat::kAscii;
    if (format == "svg") {
      f = RenderFormat::kSvg;
    } else if (format != "ascii") {
      throw Error(ErrorCode::kParse, "format must be ascii or svg");
    }
    return flowfire::render(*s->rules.complex, s->current, f, w);
  } catch (const Error& e) {
    throw ServiceError(422, e.what());
  }
}

void SessionService::persist(const Session& s) const {
  if (!persist_dir_) return;
  json record{{"id", s.id}, {"description", s.description},
              {"version", s.version}, {"moves", json::array()}};
  for (const auto& m : s.log) record["moves"].push_back(io::move_to_json(m));
  const auto path = *persist_dir_ / (s.id + ".json");
  const auto tmp = *persist_dir_ / (s.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << record.dump() << '\n';
  }
  fs::rename(tmp, path);
}

std::size_t SessionService::recover() {
  if (!persist_dir_) return 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(*persist_dir_)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t restored = 0;
  for (const auto& path : files) {
    json record;
    try {
      record = io::read_json_file(path.string());
      auto s = build(record.at("description"));
      s->id = record.at("id").get<std::string>();
      for (const auto& m : record.at("moves")) {
        s->log.push_back(io::move_from_json(m));
      }
      s->current = replay(s->initial, s->log, s->rules);
      s->version = record.at("version").get<std::uint64_t>();
      std::unique_lock lock(sessions_mutex_);
      if (s->id.size() > 1 && s->id[0] == 's') {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(s->id.substr(1)) + 1);
      }
      sessions_[s->id] = s;
      ++restored;
    } catch (const std::exception&) {
      // A log that no longer replays is left on disk untouched.
    }
  }
  return restored;
}

}  // namespace flowfire::server
