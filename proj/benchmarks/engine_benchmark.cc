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

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "flowfire/analysis.h"
#include "flowfire/complex.h"
#include "flowfire/engine.h"
#include "flowfire/flow.h"

namespace flowfire {
namespace {

const CellId kSigma = CellId::grid_face(0, 0);

Rules hole_rules(Representation rep) {
  return Rules::make(std::make_shared<const Complex>(Complex::grid(kSigma)), rep,
                     true);
}

FaceRep pulse(std::int64_t k) {
  FaceRep f;
  f.set(kSigma, k);
  return f;
}

void BM_PulseRun(benchmark::State& state) {
  const auto rules = hole_rules(Representation::kFace);
  const State start{pulse(state.range(0))};
  std::uint64_t seed = 0, steps = 0;
  for (auto _ : state) {
    const auto report = run(start, rules, Strategy::seeded_random(seed++), RunOptions{});
    steps += report.steps;
    benchmark::DoNotOptimize(report.final_state);
  }
  state.counters["moves/s"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_PulseRun)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_PulseRunEdgeRep(benchmark::State& state) {
  const auto rules = hole_rules(Representation::kEdge);
  const auto start = to_representation(*rules.complex, State{pulse(state.range(0))},
                                       Representation::kEdge);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run(start, rules, Strategy::seeded_random(seed++), RunOptions{}).steps);
  }
}
BENCHMARK(BM_PulseRunEdgeRep)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PulseRunAudited(benchmark::State& state) {
  const auto rules = hole_rules(Representation::kFace);
  RunOptions options;
  options.monitors = parse_monitors("all");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto report =
        run(State{pulse(state.range(0))}, rules, Strategy::seeded_random(seed++), options);
    benchmark::DoNotOptimize(audit_trajectory(report, rules).clean());
  }
}
BENCHMARK(BM_PulseRunAudited)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EnumeratePulseTwo(benchmark::State& state) {
  const auto rules = hole_rules(Representation::kFace);
  const unsigned workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    const auto set = workers > 1
                         ? enumerate_terminals_parallel(State{pulse(2)}, rules, {}, workers)
                         : enumerate_terminals(State{pulse(2)}, rules);
    benchmark::DoNotOptimize(set.reachable_states);
  }
}
BENCHMARK(BM_EnumeratePulseTwo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EdgesToFaces(benchmark::State& state) {
  const auto grid = Complex::grid();
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(-5, 5);
  FaceRep faces;
  for (int x = 0; x < side; ++x) {
    for (int y = 0; y < side; ++y) faces.set(CellId::grid_face(x, y), v(rng));
  }
  const auto flow = faces_to_edges(grid, faces);
  for (auto _ : state) benchmark::DoNotOptimize(edges_to_faces(grid, flow));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(flow.size()));
}
BENCHMARK(BM_EdgesToFaces)->RangeMultiplier(4)->Range(8, 128);

}  // namespace
}  // namespace flowfire

BENCHMARK_MAIN();
