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

#include "flowfire/analysis.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace flowfire {

FaceRep predict_pyramid(const Complex& complex, const CellId& sigma,
                        std::int64_t k) {
  if (k < 0) {
    throw Error(ErrorCode::kInvalidArgument, "pulse height must be >= 0");
  }
  const std::int64_t radius =
      complex.is_finite() ? std::numeric_limits<std::int64_t>::max() / 4 : k;
  FaceRep out;
  for (const auto& [face, dist] : complex.faces_within(sigma, radius)) {
    out.set(face, face == sigma ? k : std::max<std::int64_t>(0, k - dist + 1));
  }
  return out;
}

namespace {

struct Node {
  State state;
  std::string encoding;
  std::uint64_t depth = 0;
};

TerminalSet finish(std::map<std::string, State> terminals, TerminalSet out) {
  for (auto& [encoding, state] : terminals) {
    out.terminals.push_back(std::move(state));
  }
  return out;
}

}  // namespace

TerminalSet enumerate_terminals(const State& initial, const Rules& rules,
                                const SearchCaps& caps, SearchOrder order) {
  TerminalSet out;
  std::map<std::string, State> terminals;
  std::unordered_set<std::string> visited;
  std::deque<Node> frontier;

  auto encoding = state_encoding(initial);
  visited.insert(encoding);
  frontier.push_back({initial, std::move(encoding), 0});

  while (!frontier.empty()) {
    Node node;
    if (order == SearchOrder::kDepthFirst) {
      node = std::move(frontier.back());
      frontier.pop_back();
    } else {
      node = std::move(frontier.front());
      frontier.pop_front();
    }
    const auto moves = legal_moves(node.state, rules);
    if (moves.empty()) {
      terminals.emplace(std::move(node.encoding), std::move(node.state));
      continue;
    }
    if (node.depth >= caps.max_depth) {
      out.truncated = true;
      continue;
    }
    for (const auto& move : moves) {
      State next = apply_move(node.state, move, rules);
      ++out.transitions;
      auto key = state_encoding(next);
      if (visited.count(key)) continue;
      if (visited.size() >= caps.max_states) {
        out.truncated = true;
        continue;
      }
      visited.insert(key);
      frontier.push_back({std::move(next), std::move(key), node.depth + 1});
    }
  }
  out.reachable_states = visited.size();
  return finish(std::move(terminals), std::move(out));
}

namespace {

class ShardedVisitedSet {
 public:
  // True when `key` was absent and has been inserted.
  bool insert(const std::string& key) {
    auto& shard = shards_[std::hash<std::string>{}(key) % shards_.size()];
    std::lock_guard lock(shard.mutex);
    return shard.keys.insert(key).second;
  }
  void erase(const std::string& key) {
    auto& shard = shards_[std::hash<std::string>{}(key) % shards_.size()];
    std::lock_guard lock(shard.mutex);
    shard.keys.erase(key);
  }

 private:
  struct Shard {
    std::mutex mutex;
    std::unordered_set<std::string> keys;
  };
  std::array<Shard, 64> shards_;
};

}  // namespace

TerminalSet enumerate_terminals_parallel(const State& initial,
                                         const Rules& rules,
                                         const SearchCaps& caps,
                                         unsigned workers) {
  workers = std::max(1u, workers);
  ShardedVisitedSet visited;
  std::atomic<std::uint64_t> states{1};
  std::atomic<std::uint64_t> transitions{0};
  std::atomic<bool> truncated{false};

  std::mutex mutex;
  std::condition_variable cv;
  std::vector<Node> stack;
  unsigned busy = 0;
  std::map<std::string, State> terminals;
  std::exception_ptr failure;

  auto encoding = state_encoding(initial);
  visited.insert(encoding);
  stack.push_back({initial, std::move(encoding), 0});

  auto worker = [&]() {
    while (true) {
      Node node;
      {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return !stack.empty() || busy == 0 || failure; });
        if (failure || stack.empty()) return;
        node = std::move(stack.back());
        stack.pop_back();
        ++busy;
      }
      std::vector<Node> children;
      try {
        const auto moves = legal_moves(node.state, rules);
        if (moves.empty()) {
          std::lock_guard lock(mutex);
          terminals.emplace(std::move(node.encoding), std::move(node.state));
        } else if (node.depth >= caps.max_depth) {
          truncated = true;
        } else {
          for (const auto& move : moves) {
            State next = apply_move(node.state, move, rules);
            ++transitions;
            auto key = state_encoding(next);
            if (!visited.insert(key)) continue;
            if (states.fetch_add(1) >= caps.max_states) {
              states.fetch_sub(1);
              visited.erase(key);
              truncated = true;
              continue;
            }
            children.push_back({std::move(next), std::move(key), node.depth + 1});
          }
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        failure = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        for (auto& child : children) stack.push_back(std::move(child));
        --busy;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  for (unsigned i = 0; i < workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  TerminalSet out;
  out.reachable_states = states.load();
  out.transitions = transitions.load();
  out.truncated = truncated.load();
  return finish(std::move(terminals), std::move(out));
}

std::vector<DiamondViolation> check_diamond(const State& config,
                                            const Rules& rules) {
  const auto moves = legal_moves(config, rules);
  std::vector<State> results;
  std::vector<std::unordered_set<std::string>> successors;
  for (const auto& move : moves) {
    results.push_back(apply_move(config, move, rules));
    std::unordered_set<std::string> next;
    for (const auto& m : legal_moves(results.back(), rules)) {
      next.insert(state_encoding(apply_move(results.back(), m, rules)));
    }
    successors.push_back(std::move(next));
  }
  std::vector<DiamondViolation> out;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    for (std::size_t j = i + 1; j < moves.size(); ++j) {
      if (results[i] == results[j]) continue;
      const bool joined = std::any_of(
          successors[j].begin(), successors[j].end(),
          [&](const std::string& s) { return successors[i].count(s) > 0; });
      if (!joined) {
        out.push_back({config, moves[i], moves[j], results[i], results[j]});
      }
    }
  }
  return out;
}

CriterionResult nontermination_criterion(const Complex& complex,
                                         const EdgeFlow& flow) {
  CriterionResult out;
  for (const auto& [vertex, b] : imbalances(complex, flow)) {
    const int degree = complex.degree(vertex);
    if (std::llabs(b) > degree) {
      out.verdict = Verdict::kNonTerminating;
      out.witness = vertex;
      out.imbalance = b;
      out.degree = degree;
      return out;
    }
    if (std::llabs(b) > std::llabs(out.imbalance)) {
      out.imbalance = b;
      out.degree = degree;
    }
  }
  return out;
}

namespace {

struct Check {
  std::string name;
  // First failing sample index and a description, if any.
  std::function<std::optional<std::pair<std::uint64_t, std::string>>()> run;
};

std::optional<std::pair<std::uint64_t, std::string>> first_failure(
    const std::vector<std::int64_t>& stream,
    const std::function<bool(std::int64_t, std::int64_t)>& ok,
    const std::string& what) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (!ok(stream[i - 1], stream[i])) {
      return std::make_pair(
          i, what + ": " + std::to_string(stream[i - 1]) + " -> " +
                 std::to_string(stream[i]));
    }
  }
  return std::nullopt;
}

}  // namespace

AuditResult audit_trajectory(const RunReport& report, const Rules& rules,
                             std::optional<std::int64_t> k) {
  const auto& s = report.streams;
  const std::size_t samples = report.steps + 1;
  const bool edge = rules.representation == Representation::kEdge;
  if (!k) k = report.pulse_k;

  auto missing = [](const std::string& name) {
    return Error(ErrorCode::kMissingMonitor,
                 "audit needs the " + name + " monitor");
  };
  if (edge && !(report.monitors & kMonitorImbalance)) throw missing("imbalance");
  if (rules.hole) {
    if (!(report.monitors & kMonitorPsi)) throw missing("psi");
    if (!k) throw missing("pulse height");
  } else if (!edge && !(report.monitors & kMonitorPhi)) {
    throw missing("phi");
  }

  std::vector<Check> checks;
  auto length_check = [&](const std::string& name, std::size_t size,
                          unsigned bit) {
    if (!(report.monitors & bit)) return;
    checks.push_back({name + "-length", [=]() -> std::optional<std::pair<std::uint64_t, std::string>> {
                        if (size == samples) return std::nullopt;
                        return std::make_pair(
                            std::min<std::uint64_t>(size, samples),
                            name + " stream has " + std::to_string(size) +
                                " samples, expected " + std::to_string(samples));
                      }});
  };
  length_check("phi", s.phi.size(), kMonitorPhi);
  length_check("psi", s.psi.size(), kMonitorPsi);
  length_check("max", s.max_value.size(), kMonitorExtrema);
  length_check("min", s.min_value.size(), kMonitorExtrema);
  length_check("chips", s.chips.size(), kMonitorChips);
  length_check("hole", s.hole_value.size(), kMonitorHoleValue);
  length_check("lemma", s.lemma_excess.size(), kMonitorLemmaExcess);
  length_check("imbalance", s.imbalance.size(), kMonitorImbalance);

  if (report.monitors & kMonitorImbalance) {
    checks.push_back({"imbalance-conserved", [&]() -> std::optional<std::pair<std::uint64_t, std::string>> {
                        for (std::size_t i = 1; i < s.imbalance.size(); ++i) {
                          if (s.imbalance[i] != s.imbalance[0]) {
                            return std::make_pair(i, "vertex imbalance changed");
                          }
                        }
                        return std::nullopt;
                      }});
  }
  if (rules.hole) {
    checks.push_back({"psi-decrease", [&] {
                        return first_failure(
                            s.psi, [](auto a, auto b) { return b <= a - 1; },
                            "psi must drop by at least 1");
                      }});
    if (report.monitors & kMonitorExtrema) {
      checks.push_back({"max-nonincreasing", [&] {
                          return first_failure(
                              s.max_value, [](auto a, auto b) { return b <= a; },
                              "maximum increased");
                        }});
      checks.push_back({"min-nondecreasing", [&] {
                          return first_failure(
                              s.min_value, [](auto a, auto b) { return b >= a; },
                              "minimum decreased");
                        }});
      checks.push_back({"nonnegative", [&]() -> std::optional<std::pair<std::uint64_t, std::string>> {
                          if (s.min_value.empty() || s.min_value[0] < 0) {
                            return std::nullopt;
                          }
                          for (std::size_t i = 0; i < s.min_value.size(); ++i) {
                            if (s.min_value[i] < 0) {
                              return std::make_pair(i, "negative face value");
                            }
                          }
                          return std::nullopt;
                        }});
    }
    if (report.monitors & kMonitorHoleValue) {
      checks.push_back({"hole-constant", [&] {
                          return first_failure(
                              s.hole_value, [](auto a, auto b) { return a == b; },
                              "hole value changed");
                        }});
    }
    if (report.monitors & kMonitorChips) {
      const auto bound =
          total_chips(predict_pyramid(*rules.complex, *rules.hole, *k));
      checks.push_back({"chips-monotone-bounded", [&, bound]() -> std::optional<std::pair<std::uint64_t, std::string>> {
                          for (std::size_t i = 0; i < s.chips.size(); ++i) {
                            if (i > 0 && s.chips[i] < s.chips[i - 1]) {
                              return std::make_pair(i, "chip count decreased");
                            }
                            if (s.chips[i] > bound) {
                              return std::make_pair(
                                  i, "chip count " + std::to_string(s.chips[i]) +
                                         " exceeds bound " + std::to_string(bound));
                            }
                          }
                          return std::nullopt;
                        }});
    }
    if (report.monitors & kMonitorLemmaExcess) {
      checks.push_back({"lemma-bound", [&]() -> std::optional<std::pair<std::uint64_t, std::string>> {
                          for (std::size_t i = 0; i < s.lemma_excess.size(); ++i) {
                            if (s.lemma_excess[i] > 0) {
                              return std::make_pair(
                                  i, "face exceeds max{0, k - dist + 1} by " +
                                         std::to_string(s.lemma_excess[i]));
                            }
                          }
                          return std::nullopt;
                        }});
    }
  } else {
    if (report.monitors & kMonitorPhi) {
      checks.push_back({"phi-decrease", [&] {
                          return first_failure(
                              s.phi, [](auto a, auto b) { return b <= a - 2; },
                              "phi must drop by at least 2");
                        }});
    }
    if (!edge && (report.monitors & kMonitorChips)) {
      checks.push_back({"chips-conserved", [&] {
                          return first_failure(
                              s.chips, [](auto a, auto b) { return a == b; },
                              "chip count changed");
                        }});
    }
  }
  // One replay serves both the move-legality check and the comparison of
  // every recorded sample against a recomputation.
  std::optional<std::pair<std::uint64_t, std::string>> replay_failure;
  std::optional<std::pair<std::uint64_t, std::string>> sample_failure;
  if (report.moves.size() != report.steps) {
    replay_failure = std::make_pair(std::uint64_t{0},
                                    "move log length differs from steps");
  } else {
    MonitorSampler sampler(rules, report.monitors, k);
    State state = report.initial;
    auto compare = [&](std::size_t i) {
      if (sample_failure) return;
      MonitorStreams fresh;
      try {
        sampler.sample(state, fresh);
      } catch (const Error& e) {
        sample_failure = std::make_pair(i, std::string(e.what()));
        return;
      }
      auto differs = [&](const auto& recorded, const auto& computed,
                         const char* name) {
        if (sample_failure || computed.empty()) return;
        if (i >= recorded.size() || !(recorded[i] == computed[0])) {
          sample_failure = std::make_pair(
              i, std::string(name) + " sample disagrees with the replay");
        }
      };
      differs(s.phi, fresh.phi, "phi");
      differs(s.psi, fresh.psi, "psi");
      differs(s.max_value, fresh.max_value, "max");
      differs(s.min_value, fresh.min_value, "min");
      differs(s.chips, fresh.chips, "chips");
      differs(s.hole_value, fresh.hole_value, "hole");
      differs(s.lemma_excess, fresh.lemma_excess, "lemma");
      differs(s.imbalance, fresh.imbalance, "imbalance");
    };
    compare(0);
    for (std::size_t i = 0; i < report.moves.size(); ++i) {
      auto reason = illegal_reason(state, report.moves[i], rules);
      if (!reason.empty()) {
        replay_failure =
            std::make_pair(i + 1, to_string(report.moves[i]) + ": " + reason);
        break;
      }
      apply_move_in_place(state, report.moves[i], rules);
      compare(i + 1);
    }
    if (!replay_failure && !(state == report.final_state)) {
      replay_failure =
          std::make_pair(report.steps, "replayed state differs from final");
    }
    if (!replay_failure && report.terminal && !is_terminal(state, rules)) {
      replay_failure =
          std::make_pair(report.steps, "reported terminal but moves remain");
    }
  }
  checks.push_back({"replay", [&] { return replay_failure; }});
  checks.push_back({"samples-match-replay", [&] { return sample_failure; }});

  AuditResult result;
  for (const auto& check : checks) {
    result.checked.push_back(check.name);
    if (auto failure = check.run()) {
      if (!result.violation || failure->first < result.violation->index) {
        result.violation =
            AuditViolation{failure->first, check.name, failure->second};
      }
    }
  }
  return result;
}

}  // namespace flowfire
