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

#include "flowfire/engine.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace flowfire {

std::string_view representation_name(Representation rep) {
  return rep == Representation::kEdge ? "edge" : "face";
}

Representation parse_representation(std::string_view name) {
  if (name == "edge") return Representation::kEdge;
  if (name == "face") return Representation::kFace;
  throw Error(ErrorCode::kParse,
              "unknown representation '" + std::string(name) + "'");
}

std::string_view hole_rule_name(HoleTransferRule rule) {
  switch (rule) {
    case HoleTransferRule::kStandard: return "standard";
    case HoleTransferRule::kLiteral: return "literal";
    case HoleTransferRule::kOffByOne: return "off-by-one";
  }
  return "?";
}

HoleTransferRule parse_hole_rule(std::string_view name) {
  if (name == "standard") return HoleTransferRule::kStandard;
  if (name == "literal") return HoleTransferRule::kLiteral;
  if (name == "off-by-one") return HoleTransferRule::kOffByOne;
  throw Error(ErrorCode::kParse, "unknown hole rule '" + std::string(name) + "'");
}

std::string_view move_kind_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::kEdgeFire: return "edge-fire";
    case MoveKind::kEdgeFireOneSided: return "edge-fire-one-sided";
    case MoveKind::kTransfer: return "transfer";
    case MoveKind::kCreate: return "create";
    case MoveKind::kDelete: return "delete";
  }
  return "?";
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kTerminal: return "terminal";
    case StopReason::kStepCap: return "step-cap";
    case StopReason::kRevisit: return "revisit";
  }
  return "?";
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kSeededRandom: return "seeded-random";
    case StrategyKind::kLexicographicFirst: return "lexicographic-first";
    case StrategyKind::kMaxDifference: return "max-difference";
    case StrategyKind::kFifoQueue: return "fifo-queue";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "random" || name == "seeded-random") {
    return StrategyKind::kSeededRandom;
  }
  if (name == "lex" || name == "lexicographic-first") {
    return StrategyKind::kLexicographicFirst;
  }
  if (name == "max-diff" || name == "max-difference") {
    return StrategyKind::kMaxDifference;
  }
  if (name == "fifo" || name == "fifo-queue") return StrategyKind::kFifoQueue;
  throw Error(ErrorCode::kParse, "unknown strategy '" + std::string(name) + "'");
}

unsigned parse_monitors(std::string_view list) {
  unsigned mask = 0;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto name = list.substr(0, comma);
    if (name == "phi") mask |= kMonitorPhi;
    else if (name == "psi") mask |= kMonitorPsi;
    else if (name == "extrema") mask |= kMonitorExtrema;
    else if (name == "imbalance") mask |= kMonitorImbalance;
    else if (name == "chips") mask |= kMonitorChips;
    else if (name == "hole") mask |= kMonitorHoleValue;
    else if (name == "lemma") mask |= kMonitorLemmaExcess;
    else if (name == "all") mask |= 0x7f;
    else if (!name.empty()) {
      throw Error(ErrorCode::kParse, "unknown monitor '" + std::string(name) + "'");
    }
    if (comma == std::string_view::npos) break;
    list = list.substr(comma + 1);
  }
  return mask;
}

Rules Rules::make(std::shared_ptr<const Complex> complex,
                  Representation representation, bool with_hole) {
  Rules rules;
  rules.representation = representation;
  if (with_hole) {
    if (!complex->distinguished()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hole rules need a distinguished face on the complex");
    }
    rules.hole = complex->distinguished();
  }
  rules.complex = std::move(complex);
  return rules;
}

Representation representation_of(const State& state) {
  return std::holds_alternative<EdgeFlow>(state) ? Representation::kEdge
                                                 : Representation::kFace;
}

State to_representation(const Complex& complex, const State& state,
                        Representation representation) {
  if (representation_of(state) == representation) return state;
  if (const auto* faces = std::get_if<FaceRep>(&state)) {
    return faces_to_edges(complex, *faces);
  }
  return edges_to_faces(complex, std::get<EdgeFlow>(state));
}

std::string state_encoding(const State& state) {
  return std::visit(
      [](const auto& field) {
        return std::string(1, static_cast<char>(
                                  std::is_same_v<std::decay_t<decltype(field)>,
                                                 EdgeFlow>
                                      ? 'E'
                                      : 'F')) +
               field.canonical_encoding();
      },
      state);
}

std::string to_string(const Move& move) {
  std::string out(move_kind_name(move.kind));
  out += ' ';
  out += to_string(move.cell);
  if (move.kind == MoveKind::kTransfer) out += "->" + to_string(move.other);
  if (move.kind == MoveKind::kEdgeFireOneSided) {
    out += " across " + to_string(move.other);
  }
  return out;
}

namespace {

void check_representation(const State& state, const Rules& rules) {
  if (representation_of(state) != rules.representation) {
    throw Error(ErrorCode::kRepresentationMismatch,
                "state is in the " +
                    std::string(representation_name(representation_of(state))) +
                    " representation but the rules expect " +
                    std::string(representation_name(rules.representation)));
  }
  if (rules.representation == Representation::kEdge &&
      !rules.complex->supports_edges()) {
    throw Error(ErrorCode::kUnsupported,
                "the n-dimensional grid only supports the facet representation");
  }
}

std::int64_t sign_of(std::int64_t v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Difference a - b without overflow.
__int128 diff(std::int64_t a, std::int64_t b) {
  return static_cast<__int128>(a) - static_cast<__int128>(b);
}

bool transfer_allowed(const Rules& rules, std::int64_t from, std::int64_t to) {
  if (!rules.hole) return diff(from, to) >= 2;
  switch (rules.hole_transfer) {
    case HoleTransferRule::kStandard: return diff(from, to) >= 2;
    case HoleTransferRule::kLiteral:
      return diff(from, to) >= -2 && (from != 0 || to != 0);
    case HoleTransferRule::kOffByOne: return diff(from, to) >= 1;
  }
  return false;
}

void legal_face_moves(const FaceRep& faces, const Rules& rules,
                      std::vector<Move>& out) {
  const Complex& complex = *rules.complex;
  std::vector<CellId> candidates;
  for (const auto& [face, value] : faces) {
    candidates.push_back(face);
    for (const auto& n : complex.neighbors(face)) candidates.push_back(n);
  }
  if (rules.hole) {
    for (const auto& n : complex.neighbors(*rules.hole)) candidates.push_back(n);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  const std::int64_t hole_value = rules.hole ? faces.get(*rules.hole) : 0;
  for (const auto& a : candidates) {
    if (rules.hole && a == *rules.hole) continue;
    const auto fa = faces.get(a);
    for (const auto& b : complex.neighbors(a)) {
      if (rules.hole && b == *rules.hole) {
        if (hole_value > fa) out.push_back(Move::create(a));
        if (hole_value < fa) out.push_back(Move::remove(a));
        continue;
      }
      if (transfer_allowed(rules, fa, faces.get(b))) {
        out.push_back(Move::transfer(a, b));
      }
    }
  }
}

std::optional<SignedCell> non_hole_side(const Complex& complex,
                                        const CellId& edge,
                                        const CellId& hole) {
  const auto pair = complex.incident_faces(edge);
  if (pair[0].cell == hole) return pair[1];
  if (pair[1].cell == hole) return pair[0];
  return std::nullopt;
}

void legal_edge_moves(const EdgeFlow& flow, const Rules& rules,
                      std::vector<Move>& out) {
  const Complex& complex = *rules.complex;
  for (const auto& [edge, value] : flow) {
    if (rules.hole) {
      if (auto side = non_hole_side(complex, edge, *rules.hole)) {
        out.push_back(Move::edge_fire_one_sided(edge, side->cell));
        continue;
      }
    }
    if (value >= 2 || value <= -2) out.push_back(Move::edge_fire(edge));
  }
}

void reroute(EdgeFlow& flow, const Complex& complex, std::int64_t direction,
             const SignedCell& face) {
  for (const auto& [edge, sign] : complex.boundary(face.cell)) {
    flow.add(edge, -direction * face.sign * sign);
  }
}

}  // namespace

void validate_state(const State& state, const Rules& rules) {
  check_representation(state, rules);
  const Complex& complex = *rules.complex;
  std::visit(
      [&](const auto& field) {
        for (const auto& [cell, value] : field) {
          if (rules.representation == Representation::kEdge &&
              !complex.has_edge(cell)) {
            throw Error(ErrorCode::kUnknownEdge,
                        "unknown edge " + to_string(cell), to_string(cell));
          }
          if (rules.representation == Representation::kFace &&
              !complex.has_face(cell)) {
            throw Error(ErrorCode::kUnknownFace,
                        "unknown face " + to_string(cell), to_string(cell));
          }
        }
      },
      state);
}

std::vector<Move> legal_moves(const State& state, const Rules& rules) {
  check_representation(state, rules);
  std::vector<Move> out;
  if (const auto* faces = std::get_if<FaceRep>(&state)) {
    legal_face_moves(*faces, rules, out);
  } else {
    legal_edge_moves(std::get<EdgeFlow>(state), rules, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_terminal(const State& state, const Rules& rules) {
  return legal_moves(state, rules).empty();
}

std::string illegal_reason(const State& state, const Move& move,
                           const Rules& rules) {
  check_representation(state, rules);
  const Complex& complex = *rules.complex;
  const bool edge_move = move.kind == MoveKind::kEdgeFire ||
                         move.kind == MoveKind::kEdgeFireOneSided;
  if (edge_move != (rules.representation == Representation::kEdge)) {
    return "move kind does not match the representation";
  }
  if (edge_move) {
    if (!complex.has_edge(move.cell)) return "unknown edge";
    const auto value = std::get<EdgeFlow>(state).get(move.cell);
    std::optional<SignedCell> side;
    if (rules.hole) side = non_hole_side(complex, move.cell, *rules.hole);
    if (move.kind == MoveKind::kEdgeFire) {
      if (side) return "edge lies on the hole boundary";
      if (value < 2 && value > -2) return "needs 2 units of flow";
      return {};
    }
    if (!side) return "edge is not on the hole boundary";
    if (side->cell != move.other) return "must reroute across the non-hole face";
    if (value == 0) return "needs 1 unit of flow";
    return {};
  }
  const auto& faces = std::get<FaceRep>(state);
  if (!complex.has_face(move.cell)) return "unknown face";
  if (rules.hole && move.cell == *rules.hole) return "the hole never changes";
  const auto fa = faces.get(move.cell);
  if (move.kind == MoveKind::kTransfer) {
    if (!complex.has_face(move.other)) return "unknown face";
    if (rules.hole && move.other == *rules.hole) {
      return "transfers never touch the hole";
    }
    const auto n = complex.neighbors(move.cell);
    if (!std::binary_search(n.begin(), n.end(), move.other)) {
      return "faces are not neighbours";
    }
    if (!transfer_allowed(rules, fa, faces.get(move.other))) {
      return "face values differ by less than 2";
    }
    return {};
  }
  if (!rules.hole) return "create/delete need a hole";
  const auto n = complex.neighbors(*rules.hole);
  if (!std::binary_search(n.begin(), n.end(), move.cell)) {
    return "face is not a neighbour of the hole";
  }
  const auto hole_value = faces.get(*rules.hole);
  if (move.kind == MoveKind::kCreate && !(hole_value > fa)) {
    return "create needs the hole value to exceed the face value";
  }
  if (move.kind == MoveKind::kDelete && !(hole_value < fa)) {
    return "delete needs the face value to exceed the hole value";
  }
  return {};
}

void apply_move_in_place(State& state, const Move& move, const Rules& rules) {
  if (auto reason = illegal_reason(state, move, rules); !reason.empty()) {
    throw Error(ErrorCode::kIllegalMove,
                "illegal move " + to_string(move) + ": " + reason);
  }
  const Complex& complex = *rules.complex;
  switch (move.kind) {
    case MoveKind::kEdgeFire: {
      auto& flow = std::get<EdgeFlow>(state);
      const auto direction = sign_of(flow.get(move.cell));
      for (const auto& face : complex.incident_faces(move.cell)) {
        reroute(flow, complex, direction, face);
      }
      break;
    }
    case MoveKind::kEdgeFireOneSided: {
      auto& flow = std::get<EdgeFlow>(state);
      const auto direction = sign_of(flow.get(move.cell));
      reroute(flow, complex, direction,
              *non_hole_side(complex, move.cell, *rules.hole));
      break;
    }
    case MoveKind::kTransfer: {
      auto& faces = std::get<FaceRep>(state);
      faces.add(move.cell, -1);
      faces.add(move.other, +1);
      break;
    }
    case MoveKind::kCreate:
      std::get<FaceRep>(state).add(move.cell, +1);
      break;
    case MoveKind::kDelete:
      std::get<FaceRep>(state).add(move.cell, -1);
      break;
  }
}

State apply_move(const State& state, const Move& move, const Rules& rules) {
  State next = state;
  apply_move_in_place(next, move, rules);
  return next;
}

std::int64_t move_magnitude(const State& state, const Move& move,
                            const Rules& rules) {
  switch (move.kind) {
    case MoveKind::kEdgeFire:
    case MoveKind::kEdgeFireOneSided:
      return std::llabs(std::get<EdgeFlow>(state).get(move.cell));
    case MoveKind::kTransfer: {
      const auto& f = std::get<FaceRep>(state);
      return std::llabs(f.get(move.cell) - f.get(move.other));
    }
    case MoveKind::kCreate:
    case MoveKind::kDelete: {
      const auto& f = std::get<FaceRep>(state);
      return std::llabs(f.get(*rules.hole) - f.get(move.cell));
    }
  }
  return 0;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Strategy Strategy::seeded_random(std::uint64_t seed) {
  return Strategy(StrategyKind::kSeededRandom, seed);
}
Strategy Strategy::lexicographic_first() {
  return Strategy(StrategyKind::kLexicographicFirst);
}
Strategy Strategy::max_difference() {
  return Strategy(StrategyKind::kMaxDifference);
}
Strategy Strategy::fifo_queue() { return Strategy(StrategyKind::kFifoQueue); }

Strategy Strategy::make(StrategyKind kind, std::uint64_t seed) {
  return Strategy(kind, seed);
}

std::string Strategy::memory_encoding() const {
  std::string out;
  for (const auto& m : queue_) {
    out += '|';
    out += to_string(m);
  }
  return out;
}

std::size_t Strategy::choose(std::span<const Move> moves, const State& state,
                             const Rules& rules) {
  if (moves.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no move to choose from");
  }
  switch (kind_) {
    case StrategyKind::kSeededRandom:
      return static_cast<std::size_t>(rng_.next() % moves.size());
    case StrategyKind::kLexicographicFirst:
      return 0;
    case StrategyKind::kMaxDifference: {
      std::size_t best = 0;
      std::int64_t best_value = -1;
      for (std::size_t i = 0; i < moves.size(); ++i) {
        const auto m = move_magnitude(state, moves[i], rules);
        if (m > best_value) {
          best = i;
          best_value = m;
        }
      }
      return best;
    }
    case StrategyKind::kFifoQueue: {
      // Drop moves that stopped being legal, enqueue new ones in cell order.
      std::erase_if(queue_, [&](const Move& m) {
        if (std::binary_search(moves.begin(), moves.end(), m)) return false;
        queued_.erase(m);
        return true;
      });
      for (const auto& m : moves) {
        if (queued_.insert(m).second) queue_.push_back(m);
      }
      const Move next = queue_.front();
      queue_.pop_front();
      queued_.erase(next);
      return static_cast<std::size_t>(
          std::lower_bound(moves.begin(), moves.end(), next) - moves.begin());
    }
  }
  return 0;
}

namespace {

constexpr unsigned kFaceMonitors = kMonitorPhi | kMonitorPsi | kMonitorExtrema |
                                   kMonitorChips | kMonitorHoleValue |
                                   kMonitorLemmaExcess;

}  // namespace

MonitorSampler::MonitorSampler(const Rules& rules, unsigned monitors,
                               std::optional<std::int64_t> pulse_k)
    : rules_(rules), monitors_(monitors), k_(pulse_k) {}

void MonitorSampler::sample(const State& state, MonitorStreams& out) {
  const FaceRep* faces = std::get_if<FaceRep>(&state);
  FaceRep converted;
  if (!faces && (monitors_ & kFaceMonitors)) {
    converted = edges_to_faces(*rules_.complex, std::get<EdgeFlow>(state));
    faces = &converted;
  }
  if (monitors_ & kMonitorPhi) out.phi.push_back(phi(*faces));
  if (monitors_ & kMonitorPsi) {
    out.psi.push_back(psi(*rules_.complex, *faces, *k_, *rules_.hole));
  }
  if (monitors_ & kMonitorExtrema) {
    const auto [hi, lo] = face_extrema(*rules_.complex, *faces);
    out.max_value.push_back(hi);
    out.min_value.push_back(lo);
  }
  if (monitors_ & kMonitorChips) out.chips.push_back(total_chips(*faces));
  if (monitors_ & kMonitorHoleValue) {
    out.hole_value.push_back(faces->get(*rules_.hole));
  }
  if (monitors_ & kMonitorLemmaExcess) {
    std::int64_t excess = 0;
    for (const auto& [face, value] : *faces) {
      if (face == *rules_.hole) continue;
      const auto bound =
          std::max<std::int64_t>(0, *k_ - distance_to_hole(face) + 1);
      excess = std::max(excess, value - bound);
    }
    out.lemma_excess.push_back(excess);
  }
  if (monitors_ & kMonitorImbalance) {
    if (const auto* flow = std::get_if<EdgeFlow>(&state)) {
      out.imbalance.push_back(imbalances(*rules_.complex, *flow));
    } else {
      out.imbalance.emplace_back();
    }
  }
}

std::int64_t MonitorSampler::distance_to_hole(const CellId& face) {
  if (!rules_.complex->is_finite()) {
    return rules_.complex->dual_distance(*rules_.hole, face);
  }
  if (distances_.empty()) {
    for (const auto& [f, d] : rules_.complex->faces_within(
             *rules_.hole, std::numeric_limits<std::int64_t>::max() / 4)) {
      distances_[f] = d;
    }
  }
  auto it = distances_.find(face);
  if (it == distances_.end()) {
    throw Error(ErrorCode::kUnreachable,
                to_string(face) + " is unreachable from the hole");
  }
  return it->second;
}

RunReport run(const State& initial, const Rules& rules, Strategy strategy,
              const RunOptions& options) {
  validate_state(initial, rules);
  RunReport report;
  report.initial = initial;
  report.monitors = options.monitors;

  const bool needs_pulse = options.monitors & (kMonitorPsi | kMonitorLemmaExcess);
  if ((needs_pulse || (options.monitors & kMonitorHoleValue)) && !rules.hole) {
    throw Error(ErrorCode::kInvalidArgument,
                "psi, lemma and hole monitors need hole rules");
  }
  if (options.pulse_k) {
    report.pulse_k = options.pulse_k;
  } else if (rules.hole) {
    if (const auto* faces = std::get_if<FaceRep>(&initial)) {
      report.pulse_k = faces->get(*rules.hole);
    } else if (options.monitors & kFaceMonitors) {
      report.pulse_k = edges_to_faces(*rules.complex, std::get<EdgeFlow>(initial))
                           .get(*rules.hole);
    }
  }

  MonitorSampler sampler(rules, options.monitors, report.pulse_k);
  State state = initial;
  sampler.sample(state, report.streams);

  // A repeated configuration is a cycle of the run only when the strategy's
  // next choice is a function of the configuration and its own memory, so
  // seeded-random runs never stop on a revisit.
  bool detect = options.detect_revisits.value_or(rules.representation ==
                                                 Representation::kEdge) &&
                strategy.kind() != StrategyKind::kSeededRandom;
  auto key = [&strategy](const State& s) {
    return state_encoding(s) + strategy.memory_encoding();
  };
  std::unordered_set<std::string> seen;
  if (detect) seen.insert(key(state));

  while (true) {
    const auto moves = legal_moves(state, rules);
    if (moves.empty()) {
      report.stop = StopReason::kTerminal;
      report.terminal = true;
      break;
    }
    if (report.steps >= options.step_cap) {
      report.stop = StopReason::kStepCap;
      break;
    }
    const auto& move = moves[strategy.choose(moves, state, rules)];
    apply_move_in_place(state, move, rules);
    report.moves.push_back(move);
    ++report.steps;
    sampler.sample(state, report.streams);
    if (options.on_step) options.on_step(report.steps, state);
    if (detect) {
      if (!seen.insert(key(state)).second) {
        report.stop = StopReason::kRevisit;
        break;
      }
      if (seen.size() >= options.revisit_budget) {
        detect = false;
        seen.clear();
        report.revisit_detection_disabled_at = report.steps;
      }
    }
  }
  report.final_state = std::move(state);
  return report;
}

Move edge_move_for(const Move& face_move, const Rules& rules) {
  const Complex& complex = *rules.complex;
  switch (face_move.kind) {
    case MoveKind::kTransfer: {
      const auto shared = complex.shared_edges(face_move.cell, face_move.other);
      if (shared.empty()) {
        throw Error(ErrorCode::kIllegalMove, "faces share no edge");
      }
      return Move::edge_fire(shared.front());
    }
    case MoveKind::kCreate:
    case MoveKind::kDelete: {
      if (!rules.hole) {
        throw Error(ErrorCode::kIllegalMove, "create/delete need a hole");
      }
      const auto shared = complex.shared_edges(face_move.cell, *rules.hole);
      if (shared.empty()) {
        throw Error(ErrorCode::kIllegalMove, "face is not next to the hole");
      }
      return Move::edge_fire_one_sided(shared.front(), face_move.cell);
    }
    default:
      return face_move;
  }
}

Move face_move_for(const Move& edge_move, const EdgeFlow& flow,
                   const Rules& rules) {
  const Complex& complex = *rules.complex;
  const auto direction = sign_of(flow.get(edge_move.cell));
  if (edge_move.kind == MoveKind::kEdgeFire) {
    const auto pair = complex.incident_faces(edge_move.cell);
    // The face whose boundary agrees with the flow loses a chip.
    return pair[0].sign == direction ? Move::transfer(pair[0].cell, pair[1].cell)
                                     : Move::transfer(pair[1].cell, pair[0].cell);
  }
  if (edge_move.kind == MoveKind::kEdgeFireOneSided) {
    int sign = 0;
    for (const auto& [face, s] : complex.incident_faces(edge_move.cell)) {
      if (face == edge_move.other) sign = s;
    }
    return sign == direction ? Move::remove(edge_move.other)
                             : Move::create(edge_move.other);
  }
  return edge_move;
}

bool to_face_rules_equivalence(const Complex& complex,
                               const EdgeFlow& edge_state,
                               const FaceRep& face_state) {
  return edges_to_faces(complex, edge_state) == face_state;
}

}  // namespace flowfire
