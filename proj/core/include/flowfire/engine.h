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

#ifndef FLOWFIRE_ENGINE_H_
#define FLOWFIRE_ENGINE_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "flowfire/complex.h"
#include "flowfire/flow.h"

namespace flowfire {

enum class Representation { kEdge, kFace };

std::string_view representation_name(Representation rep);
// "edge" or "face".
Representation parse_representation(std::string_view name);

// How a transfer between two non-hole faces is licensed under hole rules.
// kStandard (F_a >= F_b + 2) is the rule the theorems are about. The other
// two exist for fault injection only: kLiteral is the condition
// F_a >= F_b - 2 (restricted to pairs touching the support, since otherwise
// every pair of empty faces would qualify) and kOffByOne is F_a >= F_b + 1.
enum class HoleTransferRule { kStandard, kLiteral, kOffByOne };

std::string_view hole_rule_name(HoleTransferRule rule);
// "standard", "literal" or "off-by-one".
HoleTransferRule parse_hole_rule(std::string_view name);

struct Rules {
  std::shared_ptr<const Complex> complex;
  Representation representation = Representation::kFace;
  std::optional<CellId> hole;
  HoleTransferRule hole_transfer = HoleTransferRule::kStandard;

  // Plain rules (no hole) or hole rules around the complex's distinguished
  // face. Throws InvalidArgument when `with_hole` is set and there is none.
  static Rules make(std::shared_ptr<const Complex> complex,
                    Representation representation, bool with_hole);
};

using State = std::variant<EdgeFlow, FaceRep>;

Representation representation_of(const State& state);
std::string state_encoding(const State& state);

// The same configuration in the other representation when asked; converting
// edges to faces throws NotConservative for non-conservative flow.
State to_representation(const Complex& complex, const State& state,
                        Representation representation);

enum class MoveKind : std::uint8_t {
  kEdgeFire,          // edge: both incident faces
  kEdgeFireOneSided,  // edge on the hole boundary, across `face`
  kTransfer,          // one chip from `from` to `to`
  kCreate,            // chip created at a neighbour of the hole
  kDelete,            // chip deleted from a neighbour of the hole
};

std::string_view move_kind_name(MoveKind kind);

// One firing step. For edge moves `cell` is the edge and `other` the face
// rerouted across (one-sided only); for Transfer `cell` is the source and
// `other` the target face; Create/Delete name the face in `cell`.
struct Move {
  MoveKind kind = MoveKind::kTransfer;
  CellId cell;
  CellId other;

  static Move edge_fire(const CellId& edge) {
    return {MoveKind::kEdgeFire, edge, {}};
  }
  static Move edge_fire_one_sided(const CellId& edge, const CellId& face) {
    return {MoveKind::kEdgeFireOneSided, edge, face};
  }
  static Move transfer(const CellId& from, const CellId& to) {
    return {MoveKind::kTransfer, from, to};
  }
  static Move create(const CellId& face) {
    return {MoveKind::kCreate, face, {}};
  }
  static Move remove(const CellId& face) {
    return {MoveKind::kDelete, face, {}};
  }

  auto operator<=>(const Move& o) const {
    if (auto c = cell <=> o.cell; c != 0) return c;
    if (auto c = other <=> o.other; c != 0) return c;
    return kind <=> o.kind;
  }
  bool operator==(const Move&) const = default;
};

std::string to_string(const Move& move);

// Throws RepresentationMismatch, UnknownEdge or UnknownFace when `state`
// does not fit the rules' representation and complex.
void validate_state(const State& state, const Rules& rules);

// Every move the applicable firing box permits, sorted by cell order.
std::vector<Move> legal_moves(const State& state, const Rules& rules);
bool is_terminal(const State& state, const Rules& rules);

// Empty when `move` is legal; otherwise the failed precondition.
std::string illegal_reason(const State& state, const Move& move,
                           const Rules& rules);

// Throws IllegalMove when the move is not legal in `state`.
State apply_move(const State& state, const Move& move, const Rules& rules);
// Single-owner variant used by search loops.
void apply_move_in_place(State& state, const Move& move, const Rules& rules);

// |f(e)| for edge moves, |F_a - F_b| (or |F_hole - F_a|) for face moves.
std::int64_t move_magnitude(const State& state, const Move& move,
                            const Rules& rules);

// splitmix64; documented so that seeded runs reproduce across
// implementations: state += 0x9E3779B97F4A7C15, then the standard
// xor-shift-multiply finaliser. A random choice among n moves takes
// next() % n.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

enum class StrategyKind {
  kSeededRandom,
  kLexicographicFirst,
  kMaxDifference,
  kFifoQueue,
};

std::string_view strategy_name(StrategyKind kind);
// Accepts "random", "lex", "max-diff", "fifo" (and the full names).
StrategyKind parse_strategy(std::string_view name);

// Chooses one move among the legal ones. Deterministic given the seed and
// the sequence of states it was shown.
class Strategy {
 public:
  static Strategy seeded_random(std::uint64_t seed);
  static Strategy lexicographic_first();
  static Strategy max_difference();
  static Strategy fifo_queue();
  static Strategy make(StrategyKind kind, std::uint64_t seed);

  StrategyKind kind() const { return kind_; }
  // `moves` must be non-empty and sorted; returns an index into it.
  std::size_t choose(std::span<const Move> moves, const State& state,
                     const Rules& rules);
  // The strategy's own memory (the pending FIFO queue), empty otherwise.
  std::string memory_encoding() const;

 private:
  explicit Strategy(StrategyKind kind, std::uint64_t seed = 0)
      : kind_(kind), rng_(seed) {}

  StrategyKind kind_;
  SplitMix64 rng_;
  std::deque<Move> queue_;
  std::set<Move> queued_;
};

enum Monitor : unsigned {
  kMonitorPhi = 1u << 0,
  kMonitorPsi = 1u << 1,
  kMonitorExtrema = 1u << 2,
  kMonitorImbalance = 1u << 3,
  kMonitorChips = 1u << 4,
  kMonitorHoleValue = 1u << 5,
  kMonitorLemmaExcess = 1u << 6,
};

// Comma-separated monitor names ("phi,psi,extrema,imbalance,chips,hole,
// lemma" or "all") to a mask.
unsigned parse_monitors(std::string_view list);

enum class StopReason { kTerminal, kStepCap, kRevisit };

std::string_view stop_reason_name(StopReason reason);

// Per-sample streams, each of length steps + 1 when enabled.
struct MonitorStreams {
  std::vector<std::int64_t> phi;
  std::vector<std::int64_t> psi;
  std::vector<std::int64_t> max_value;
  std::vector<std::int64_t> min_value;
  std::vector<std::int64_t> chips;
  std::vector<std::int64_t> hole_value;
  // max(0, max over faces t != hole of K_t - max{0, k - dist(hole, t) + 1}).
  std::vector<std::int64_t> lemma_excess;
  std::vector<std::vector<VertexImbalance>> imbalance;

  bool operator==(const MonitorStreams&) const = default;
};

// Records the monitor values of successive states the way run() does.
class MonitorSampler {
 public:
  MonitorSampler(const Rules& rules, unsigned monitors,
                 std::optional<std::int64_t> pulse_k);
  // Appends one sample to every enabled stream.
  void sample(const State& state, MonitorStreams& out);

 private:
  std::int64_t distance_to_hole(const CellId& face);

  Rules rules_;
  unsigned monitors_;
  std::optional<std::int64_t> k_;
  std::unordered_map<CellId, std::int64_t, CellIdHash> distances_;
};

struct RunReport {
  StopReason stop = StopReason::kTerminal;
  bool terminal = false;
  std::uint64_t steps = 0;
  State initial;
  State final_state;
  std::vector<Move> moves;
  unsigned monitors = 0;
  std::optional<std::int64_t> pulse_k;
  MonitorStreams streams;
  // Set when the revisit memory budget was exhausted at this step.
  std::optional<std::uint64_t> revisit_detection_disabled_at;

  bool operator==(const RunReport&) const = default;
};

struct RunOptions {
  std::uint64_t step_cap = 1'000'000;
  unsigned monitors = 0;
  // The pulse height for psi/lemma monitors; defaults to the initial value on
  // the hole.
  std::optional<std::int64_t> pulse_k;
  // Defaults to on for the edge representation, off for faces. Never
  // applies to seeded-random strategies, whose runs do not cycle with the
  // configuration.
  std::optional<bool> detect_revisits;
  std::size_t revisit_budget = 1'000'000;
  // Called after every applied move with the step number.
  std::function<void(std::uint64_t, const State&)> on_step;
};

RunReport run(const State& initial, const Rules& rules, Strategy strategy,
              const RunOptions& options);

// The edge move that performs `face_move` in the edge representation.
Move edge_move_for(const Move& face_move, const Rules& rules);
// The face move performed by `edge_move` from `flow`.
Move face_move_for(const Move& edge_move, const EdgeFlow& flow,
                   const Rules& rules);

// True iff edges_to_faces(edge_state) equals face_state.
bool to_face_rules_equivalence(const Complex& complex,
                               const EdgeFlow& edge_state,
                               const FaceRep& face_state);

}  // namespace flowfire

#endif  // FLOWFIRE_ENGINE_H_
