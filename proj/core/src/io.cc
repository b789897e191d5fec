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

#include "flowfire/io.h"

#include <fstream>
#include <set>
#include <sstream>

namespace flowfire::io {

namespace {

[[noreturn]] void parse_error(const std::string& message) {
  throw Error(ErrorCode::kParse, message);
}

// Wraps nlohmann type errors into our parse error.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

CellId cell_from_json(const json& j) {
  if (!j.is_string()) parse_error("cell identifier must be a string");
  return parse_cell(j.get<std::string>());
}

std::optional<CellId> distinguished_of(const json& j) {
  if (!j.contains("distinguished") || j["distinguished"].is_null()) {
    return std::nullopt;
  }
  return cell_from_json(j["distinguished"]);
}

json values_json(const std::vector<std::int64_t>& v) { return json(v); }

template <class Field>
json entries_json(const Field& field) {
  json entries = json::array();
  for (const auto& [cell, value] : field) {
    entries.push_back(json::array({to_string(cell), value}));
  }
  return entries;
}

json imbalance_json(const std::vector<VertexImbalance>& snapshot) {
  json out = json::array();
  for (const auto& [v, b] : snapshot) {
    out.push_back(json::array({to_string(v), b}));
  }
  return out;
}

}  // namespace

Complex complex_from_json(const json& j) {
  return guarded("complex", [&] {
    if (!j.is_object() || !j.contains("kind")) {
      parse_error("complex needs a \"kind\"");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "grid") return Complex::grid(distinguished_of(j));
    if (kind == "ndgrid") {
      return Complex::nd_grid(j.at("n").get<int>(), distinguished_of(j));
    }
    if (kind != "planar") parse_error("unknown complex kind '" + kind + "'");
    PlanarSpec spec;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) parse_error("edge must be [tail, head]");
      spec.edges.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
    }
    for (const auto& f : j.at("faces")) {
      std::vector<std::pair<std::int64_t, int>> walk;
      for (const auto& entry : f) {
        if (!entry.is_array() || entry.size() != 2) {
          parse_error("face entry must be [edgeIndex, sign]");
        }
        walk.emplace_back(entry[0].get<std::int64_t>(), entry[1].get<int>());
      }
      spec.faces.push_back(std::move(walk));
    }
    if (j.contains("external") && !j["external"].is_null()) {
      spec.external = j["external"].get<std::int64_t>();
    }
    if (auto sigma = distinguished_of(j)) {
      if (sigma->kind != CellKind::kPlanarFace) {
        parse_error("planar distinguished face must look like f<index>");
      }
      spec.distinguished = sigma->index();
    }
    return Complex::planar(spec);
  });
}

json complex_to_json(const Complex& complex) {
  json j;
  switch (complex.kind()) {
    case ComplexKind::kGrid: j["kind"] = "grid"; break;
    case ComplexKind::kNdGrid:
      j["kind"] = "ndgrid";
      j["n"] = complex.dimension();
      break;
    case ComplexKind::kPlanar: {
      const auto& spec = *complex.planar_spec();
      j["kind"] = "planar";
      j["edges"] = json::array();
      for (auto [t, h] : spec.edges) j["edges"].push_back({t, h});
      j["faces"] = json::array();
      for (const auto& walk : spec.faces) {
        json f = json::array();
        for (auto [e, s] : walk) f.push_back({e, s});
        j["faces"].push_back(f);
      }
      if (spec.external) j["external"] = *spec.external;
      break;
    }
  }
  if (complex.distinguished()) {
    j["distinguished"] = to_string(*complex.distinguished());
  }
  return j;
}

State state_from_json(const json& j) {
  return guarded("configuration", [&]() -> State {
    if (!j.is_object()) parse_error("configuration must be an object");
    const auto rep = j.at("representation").get<std::string>();
    if (rep != "edge" && rep != "face") {
      parse_error("representation must be \"edge\" or \"face\"");
    }
    std::set<CellId> seen;
    std::vector<std::pair<CellId, std::int64_t>> entries;
    for (const auto& entry : j.at("entries")) {
      if (!entry.is_array() || entry.size() != 2) {
        parse_error("entry must be [cell, value]");
      }
      const CellId cell = cell_from_json(entry[0]);
      const auto value = entry[1].get<std::int64_t>();
      if (value == 0) parse_error("entry " + to_string(cell) + " has value 0");
      if (!seen.insert(cell).second) {
        parse_error("duplicate entry " + to_string(cell));
      }
      if (rep == "edge" ? !cell.is_edge() : !cell.is_face()) {
        parse_error(to_string(cell) + " is not a" +
                    (rep == "edge" ? "n edge" : " face"));
      }
      entries.emplace_back(cell, value);
    }
    if (rep == "edge") {
      EdgeFlow flow;
      for (auto [c, v] : entries) flow.set(c, v);
      return flow;
    }
    FaceRep faces;
    for (auto [c, v] : entries) faces.set(c, v);
    return faces;
  });
}

json state_to_json(const State& state) {
  json j;
  j["representation"] = std::string(representation_name(representation_of(state)));
  j["entries"] = std::visit([](const auto& f) { return entries_json(f); }, state);
  return j;
}

json move_to_json(const Move& move) {
  json j;
  j["kind"] = std::string(move_kind_name(move.kind));
  switch (move.kind) {
    case MoveKind::kEdgeFire: j["edge"] = to_string(move.cell); break;
    case MoveKind::kEdgeFireOneSided:
      j["edge"] = to_string(move.cell);
      j["face"] = to_string(move.other);
      break;
    case MoveKind::kTransfer:
      j["from"] = to_string(move.cell);
      j["to"] = to_string(move.other);
      break;
    case MoveKind::kCreate:
    case MoveKind::kDelete: j["face"] = to_string(move.cell); break;
  }
  return j;
}

Move move_from_json(const json& j) {
  return guarded("move", [&] {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "edge-fire") return Move::edge_fire(cell_from_json(j.at("edge")));
    if (kind == "edge-fire-one-sided") {
      return Move::edge_fire_one_sided(cell_from_json(j.at("edge")),
                                       cell_from_json(j.at("face")));
    }
    if (kind == "transfer") {
      return Move::transfer(cell_from_json(j.at("from")),
                            cell_from_json(j.at("to")));
    }
    if (kind == "create") return Move::create(cell_from_json(j.at("face")));
    if (kind == "delete") return Move::remove(cell_from_json(j.at("face")));
    parse_error("unknown move kind '" + kind + "'");
  });
}

json report_to_json(const RunReport& report) {
  json j;
  j["stopReason"] = std::string(stop_reason_name(report.stop));
  j["terminal"] = report.terminal;
  j["steps"] = report.steps;
  j["initial"] = state_to_json(report.initial);
  j["final"] = state_to_json(report.final_state);
  j["moves"] = json::array();
  for (const auto& m : report.moves) j["moves"].push_back(move_to_json(m));
  j["pulseK"] = report.pulse_k ? json(*report.pulse_k) : json(nullptr);
  j["revisitDetectionDisabledAt"] =
      report.revisit_detection_disabled_at
          ? json(*report.revisit_detection_disabled_at)
          : json(nullptr);
  json monitors = json::object();
  const auto& s = report.streams;
  if (report.monitors & kMonitorPhi) monitors["phi"] = values_json(s.phi);
  if (report.monitors & kMonitorPsi) monitors["psi"] = values_json(s.psi);
  if (report.monitors & kMonitorExtrema) {
    monitors["max"] = values_json(s.max_value);
    monitors["min"] = values_json(s.min_value);
  }
  if (report.monitors & kMonitorChips) monitors["chips"] = values_json(s.chips);
  if (report.monitors & kMonitorHoleValue) {
    monitors["hole"] = values_json(s.hole_value);
  }
  if (report.monitors & kMonitorLemmaExcess) {
    monitors["lemmaExcess"] = values_json(s.lemma_excess);
  }
  if (report.monitors & kMonitorImbalance) {
    monitors["imbalance"] = json::array();
    for (const auto& snap : s.imbalance) {
      monitors["imbalance"].push_back(imbalance_json(snap));
    }
  }
  j["monitors"] = monitors;
  return j;
}

RunReport report_from_json(const json& j) {
  return guarded("report", [&] {
    RunReport r;
    const auto stop = j.at("stopReason").get<std::string>();
    if (stop == "terminal") r.stop = StopReason::kTerminal;
    else if (stop == "step-cap") r.stop = StopReason::kStepCap;
    else if (stop == "revisit") r.stop = StopReason::kRevisit;
    else parse_error("unknown stop reason '" + stop + "'");
    r.terminal = j.at("terminal").get<bool>();
    r.steps = j.at("steps").get<std::uint64_t>();
    r.initial = state_from_json(j.at("initial"));
    r.final_state = state_from_json(j.at("final"));
    for (const auto& m : j.at("moves")) r.moves.push_back(move_from_json(m));
    if (j.contains("pulseK") && !j["pulseK"].is_null()) {
      r.pulse_k = j["pulseK"].get<std::int64_t>();
    }
    if (j.contains("revisitDetectionDisabledAt") &&
        !j["revisitDetectionDisabledAt"].is_null()) {
      r.revisit_detection_disabled_at =
          j["revisitDetectionDisabledAt"].get<std::uint64_t>();
    }
    const auto& m = j.at("monitors");
    auto load = [&](const char* key, unsigned bit, std::vector<std::int64_t>& out) {
      if (!m.contains(key)) return;
      r.monitors |= bit;
      out = m[key].get<std::vector<std::int64_t>>();
    };
    load("phi", kMonitorPhi, r.streams.phi);
    load("psi", kMonitorPsi, r.streams.psi);
    load("max", kMonitorExtrema, r.streams.max_value);
    load("min", kMonitorExtrema, r.streams.min_value);
    load("chips", kMonitorChips, r.streams.chips);
    load("hole", kMonitorHoleValue, r.streams.hole_value);
    load("lemmaExcess", kMonitorLemmaExcess, r.streams.lemma_excess);
    if (m.contains("imbalance")) {
      r.monitors |= kMonitorImbalance;
      for (const auto& snap : m["imbalance"]) {
        std::vector<VertexImbalance> out;
        for (const auto& e : snap) {
          out.push_back({cell_from_json(e.at(0)), e.at(1).get<std::int64_t>()});
        }
        r.streams.imbalance.push_back(std::move(out));
      }
    }
    return r;
  });
}

json terminal_set_to_json(const TerminalSet& set) {
  json j;
  j["count"] = set.terminals.size();
  j["reachableStates"] = set.reachable_states;
  j["transitions"] = set.transitions;
  j["truncated"] = set.truncated;
  j["terminals"] = json::array();
  for (const auto& t : set.terminals) j["terminals"].push_back(state_to_json(t));
  return j;
}

json diamond_to_json(const DiamondViolation& v) {
  json j;
  j["base"] = state_to_json(v.base);
  j["first"] = move_to_json(v.first);
  j["second"] = move_to_json(v.second);
  j["left"] = state_to_json(v.left);
  j["right"] = state_to_json(v.right);
  return j;
}

json criterion_to_json(const CriterionResult& r) {
  json j;
  j["verdict"] = r.verdict == Verdict::kNonTerminating ? "non-terminating" : "unknown";
  j["witness"] = r.witness ? json(to_string(*r.witness)) : json(nullptr);
  j["imbalance"] = r.imbalance;
  j["degree"] = r.degree;
  return j;
}

json audit_to_json(const AuditResult& r) {
  json j;
  j["clean"] = r.clean();
  j["checked"] = r.checked;
  if (r.violation) {
    j["violation"] = {{"index", r.violation->index},
                      {"invariant", r.violation->invariant},
                      {"detail", r.violation->detail}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::exception& e) {
    parse_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace flowfire::io
