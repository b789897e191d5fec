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

#ifndef FLOWFIRE_ANALYSIS_H_
#define FLOWFIRE_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowfire/complex.h"
#include "flowfire/engine.h"
#include "flowfire/flow.h"

namespace flowfire {

// The closed-form terminal configuration of a pulse of height k around
// sigma: k on sigma, max{0, k - dist(sigma, t) + 1} on every other face.
FaceRep predict_pyramid(const Complex& complex, const CellId& sigma,
                        std::int64_t k);

struct SearchCaps {
  std::uint64_t max_states = 5'000'000;
  std::uint64_t max_depth = 1'000'000;
};

enum class SearchOrder { kDepthFirst, kBreadthFirst };

// Terminal configurations reachable from a start state. `terminals` are
// pairwise distinct and sorted by canonical encoding. When `truncated` is
// false the search was exhaustive and the set is exact.
struct TerminalSet {
  std::vector<State> terminals;
  std::uint64_t reachable_states = 0;
  std::uint64_t transitions = 0;
  bool truncated = false;
};

TerminalSet enumerate_terminals(const State& initial, const Rules& rules,
                                const SearchCaps& caps = {},
                                SearchOrder order = SearchOrder::kDepthFirst);

// Same search fanned out over `workers` threads sharing a deduplicating
// visited set. Untruncated results equal the sequential ones.
TerminalSet enumerate_terminals_parallel(const State& initial,
                                         const Rules& rules,
                                         const SearchCaps& caps,
                                         unsigned workers);

// A pair of legal moves whose results cannot be joined in one more step.
struct DiamondViolation {
  State base;
  Move first;
  Move second;
  State left;
  State right;
};

// Checks every unordered pair of distinct legal moves for one-step
// joinability (identical results count as joined).
std::vector<DiamondViolation> check_diamond(const State& config,
                                            const Rules& rules);

enum class Verdict { kNonTerminating, kUnknown };

struct CriterionResult {
  Verdict verdict = Verdict::kUnknown;
  std::optional<CellId> witness;
  std::int64_t imbalance = 0;
  int degree = 0;
};

// Sound non-termination test: some vertex has |inflow - outflow| > deg(v).
CriterionResult nontermination_criterion(const Complex& complex,
                                         const EdgeFlow& flow);

struct AuditViolation {
  std::uint64_t index = 0;
  std::string invariant;
  std::string detail;
};

// First violated invariant, or none for a clean bill.
struct AuditResult {
  std::optional<AuditViolation> violation;
  std::vector<std::string> checked;

  bool clean() const { return !violation.has_value(); }
};

// Re-validates a run sample by sample. Hole rules need the psi monitor and
// the pulse height (from the report or `k`); face rules without a hole need
// phi; edge rules need imbalance. Throws MissingMonitor otherwise.
AuditResult audit_trajectory(const RunReport& report, const Rules& rules,
                             std::optional<std::int64_t> k = std::nullopt);

}  // namespace flowfire

#endif  // FLOWFIRE_ANALYSIS_H_
