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

#include "cli.h"

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <thread>

#include "flowfire/analysis.h"
#include "flowfire/error.h"
#include "flowfire/io.h"
#include "flowfire/render.h"
#include "http_server.h"
#include "session_service.h"

namespace flowfire::cli {

namespace {

using io::json;

// A usage problem detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidComplex:
    case ErrorCode::kMissingMonitor:
      return kExitInvalidInput;
    default:
      return kExitIllegalConfiguration;
  }
}

// Flags shared by the commands that load a complex and a configuration.
struct Inputs {
  std::string complex_file;
  std::string config_file;
  std::string hole;
  std::string rules = "plain";
  std::string hole_rule = "standard";
  std::string representation;

  void add_to(CLI::App* cmd, bool needs_config) {
    cmd->add_option("--complex", complex_file,
                    "complex JSON file (default: the square grid)");
    auto* config = cmd->add_option("--config", config_file, "configuration JSON file");
    if (needs_config) config->required();
    cmd->add_option("--hole", hole,
                    "distinguished face, e.g. F(0,0); implies --rules hole");
    cmd->add_option("--rules", rules, "plain or hole")
        ->check(CLI::IsMember({"plain", "hole"}));
    cmd->add_option("--hole-rule", hole_rule,
                    "transfer threshold under hole rules (fault injection)")
        ->check(CLI::IsMember({"standard", "literal", "off-by-one"}));
    cmd->add_option("--representation", representation,
                    "convert the configuration to edge or face first")
        ->check(CLI::IsMember({"edge", "face"}));
  }

  std::shared_ptr<const Complex> complex() const {
    Complex c = complex_file.empty()
                    ? Complex::grid()
                    : io::complex_from_json(io::read_json_file(complex_file));
    if (!hole.empty()) c = c.with_distinguished(parse_cell(hole));
    return std::make_shared<const Complex>(std::move(c));
  }

  bool with_hole() const { return rules == "hole" || !hole.empty(); }

  // Loads everything; the configuration is converted when asked.
  std::pair<State, Rules> load() const {
    auto c = complex();
    State state = io::state_from_json(io::read_json_file(config_file));
    const auto rep = representation.empty() ? representation_of(state)
                                            : parse_representation(representation);
    state = to_representation(*c, state, rep);
    Rules rules = Rules::make(c, rep, with_hole());
    rules.hole_transfer = parse_hole_rule(hole_rule);
    validate_state(state, rules);
    return {std::move(state), std::move(rules)};
  }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

unsigned monitors_for(const std::string& list, const Rules& rules,
                      const State& state) {
  if (list.empty()) return 0;
  if (list == "all") return server::autorun_monitors(rules, state);
  return parse_monitors(list);
}

int cmd_run(const Inputs& in, const std::string& strategy, std::uint64_t seed,
            std::uint64_t step_cap, const std::string& monitors,
            bool no_revisit, bool audit, const std::string& out_file,
            std::ostream& out, std::ostream& err) {
  auto [state, rules] = in.load();
  RunOptions options;
  options.step_cap = step_cap;
  options.monitors = monitors_for(monitors, rules, state);
  if (no_revisit) options.detect_revisits = false;
  const auto report =
      run(state, rules, Strategy::make(parse_strategy(strategy), seed), options);
  emit(out_file, io::report_to_json(report).dump(2) + "\n", out);
  err << stop_reason_name(report.stop) << " after " << report.steps
      << " steps\n";
  if (audit) {
    const auto result = audit_trajectory(report, rules);
    err << "audit: " << io::audit_to_json(result).dump() << "\n";
    if (!result.clean()) return kExitVerificationFailed;
  }
  switch (report.stop) {
    case StopReason::kTerminal: return kExitOk;
    case StopReason::kStepCap: return kExitStepCap;
    case StopReason::kRevisit: return kExitRevisit;
  }
  return kExitOk;
}

int cmd_enumerate(const Inputs& in, std::uint64_t max_states,
                  std::uint64_t max_depth, const std::string& order,
                  unsigned workers, const std::string& out_file,
                  std::ostream& out, std::ostream& err) {
  auto [state, rules] = in.load();
  SearchCaps caps{max_states, max_depth};
  const auto set =
      workers > 1
          ? enumerate_terminals_parallel(state, rules, caps, workers)
          : enumerate_terminals(state, rules, caps,
                                order == "bfs" ? SearchOrder::kBreadthFirst
                                               : SearchOrder::kDepthFirst);
  emit(out_file, io::terminal_set_to_json(set).dump(2) + "\n", out);
  err << set.terminals.size() << " terminal states, " << set.reachable_states
      << " reachable" << (set.truncated ? " (truncated)" : "") << "\n";
  return set.truncated ? kExitStepCap : kExitOk;
}

struct TrialOutcome {
  bool ok = false;
  std::string reason;
  std::optional<RunReport> report;
};

TrialOutcome run_trial(const State& start, const Rules& rules,
                       const FaceRep& expected, std::uint64_t seed,
                       std::uint64_t step_cap, bool audit) {
  RunOptions options;
  options.step_cap = step_cap;
  options.monitors = audit ? server::autorun_monitors(rules, start) : 0;
  TrialOutcome outcome;
  try {
    outcome.report = run(start, rules, Strategy::seeded_random(seed), options);
  } catch (const Error& e) {
    // Monitors can fail on a broken trajectory; keep the moves for replay.
    options.monitors = 0;
    outcome.report = run(start, rules, Strategy::seeded_random(seed), options);
    outcome.reason = std::string("monitor failure: ") + e.what();
    return outcome;
  }
  const auto& r = *outcome.report;
  if (!r.terminal) {
    outcome.reason = std::string("stopped by ") +
                     std::string(stop_reason_name(r.stop)) + " after " +
                     std::to_string(r.steps) + " steps";
    return outcome;
  }
  const auto final_faces =
      to_representation(*rules.complex, r.final_state, Representation::kFace);
  if (!(std::get<FaceRep>(final_faces) == expected)) {
    outcome.reason = "terminal state differs from the pyramid";
    return outcome;
  }
  if (audit) {
    const auto result = audit_trajectory(r, rules);
    if (!result.clean()) {
      outcome.reason = "audit: " + result.violation->invariant + " at sample " +
                       std::to_string(result.violation->index);
      return outcome;
    }
  }
  outcome.ok = true;
  outcome.report.reset();
  return outcome;
}

int cmd_verify_pyramid(const Inputs& in, std::int64_t k, std::uint64_t trials,
                       std::uint64_t seed, const std::vector<std::uint64_t>& seeds,
                       std::int64_t exhaustive_max_k, std::uint64_t max_states,
                       std::uint64_t step_cap, unsigned workers, bool audit,
                       const std::string& failure_out, std::ostream& out,
                       std::ostream& err) {
  auto complex = in.complex();
  if (!complex->distinguished()) {
    throw UsageError("verify-pyramid needs a distinguished face (--hole)");
  }
  if (k < 1) throw UsageError("--k must be positive");
  const auto sigma = *complex->distinguished();
  const auto rep = in.representation.empty() ? Representation::kFace
                                             : parse_representation(in.representation);
  Rules rules = Rules::make(complex, rep, true);
  rules.hole_transfer = parse_hole_rule(in.hole_rule);
  FaceRep pulse;
  pulse.set(sigma, k);
  const State start = to_representation(*complex, State{pulse}, rep);
  const auto expected = predict_pyramid(*complex, sigma, k);

  std::vector<std::uint64_t> plan = seeds;
  if (plan.empty()) {
    for (std::uint64_t i = 0; i < trials; ++i) plan.push_back(seed + i);
  }
  std::vector<TrialOutcome> outcomes(plan.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      outcomes[i] = run_trial(start, rules, expected, plan[i], step_cap, audit);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool pass = true;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].ok) {
      ++matched;
    } else if (pass) {
      pass = false;
      out << "trial " << i << " (seed " << plan[i] << "): " << outcomes[i].reason
          << "\n";
      const auto path = failure_out.empty() ? "verify-pyramid-failure.json"
                                            : failure_out;
      emit(path, io::report_to_json(*outcomes[i].report).dump() + "\n", out);
      out << "failing trajectory written to " << path << "\n";
    }
  }
  out << "trials: " << matched << "/" << outcomes.size()
      << " reached the pyramid\n";

  if (k <= exhaustive_max_k) {
    SearchCaps caps;
    caps.max_states = max_states;
    const auto set = workers > 1
                         ? enumerate_terminals_parallel(start, rules, caps, workers)
                         : enumerate_terminals(start, rules, caps);
    const bool unique =
        !set.truncated && set.terminals.size() == 1 &&
        std::get<FaceRep>(to_representation(*complex, set.terminals[0],
                                             Representation::kFace)) == expected;
    out << "exhaustive: " << set.terminals.size() << " terminal state(s), "
        << set.reachable_states << " reachable"
        << (set.truncated ? ", truncated" : "") << "\n";
    pass = pass && unique;
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  (void)err;
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_convert(const Inputs& in, const std::string& to,
                const std::string& out_file, std::ostream& out) {
  auto complex = in.complex();
  const State state = io::state_from_json(io::read_json_file(in.config_file));
  const auto converted = to_representation(*complex, state, parse_representation(to));
  emit(out_file, io::state_to_json(converted).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_check(const Inputs& in, std::ostream& out) {
  json report;
  std::shared_ptr<const Complex> complex;
  try {
    complex = in.complex();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidComplex) throw;
    report["complex"] = {{"valid", false}, {"violations", e.what()}};
    out << report.dump(2) << "\n";
    return kExitInvalidInput;
  }
  report["complex"] = io::complex_to_json(*complex);
  report["complex"]["valid"] = complex->validate().empty();
  if (!in.config_file.empty()) {
    const State state = io::state_from_json(io::read_json_file(in.config_file));
    Rules rules = Rules::make(complex, representation_of(state), in.with_hole());
    validate_state(state, rules);
    json s;
    s["representation"] = std::string(representation_name(representation_of(state)));
    if (const auto* flow = std::get_if<EdgeFlow>(&state)) {
      s["conservative"] = is_conservative(*complex, *flow);
      json imb = json::array();
      for (const auto& v : imbalances(*complex, *flow)) {
        imb.push_back(json::array({to_string(v.vertex), v.imbalance}));
      }
      s["imbalances"] = imb;
      s["criterion"] = io::criterion_to_json(nontermination_criterion(*complex, *flow));
      if (is_conservative(*complex, *flow)) {
        s["phi"] = phi(edges_to_faces(*complex, *flow));
      }
    } else {
      s["conservative"] = true;
      s["phi"] = phi(std::get<FaceRep>(state));
    }
    const auto moves = legal_moves(state, rules);
    s["legalMoves"] = moves.size();
    s["terminal"] = moves.empty();
    report["state"] = s;
  }
  out << report.dump(2) << "\n";
  return report["complex"]["valid"].get<bool>() ? kExitOk : kExitInvalidInput;
}

int cmd_render(const Inputs& in, const std::string& format,
               const std::string& window, const std::string& out_file,
               std::ostream& out) {
  auto complex = in.complex();
  const State state = io::state_from_json(io::read_json_file(in.config_file));
  validate_state(state, Rules::make(complex, representation_of(state), false));
  std::optional<Window> w;
  if (!window.empty()) w = parse_window(window);
  if (!w && !complex->is_finite() && complex->kind() == ComplexKind::kGrid) {
    throw UsageError("--window is required on the infinite grid");
  }
  emit(out_file,
       render(*complex, state,
              format == "svg" ? RenderFormat::kSvg : RenderFormat::kAscii, w),
       out);
  return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::string& persist,
              std::ostream& out) {
  server::SessionService service(
      persist.empty() ? std::nullopt
                      : std::optional<std::filesystem::path>(persist));
  const auto restored = service.recover();
  server::HttpServer http(service);
  int bound = port;
  if (port == 0) {
    bound = http.bind_any(host);
    if (bound < 0) throw UsageError("cannot bind " + host);
  } else if (!http.bind(host, port)) {
    throw UsageError("cannot bind " + host + ":" + std::to_string(port));
  }
  out << "listening on " << host << ":" << bound << " (" << restored
      << " sessions restored)" << std::endl;
  http.serve();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Flow-firing simulator and verifier", "flowfire"};
  app.require_subcommand(1);

  Inputs in;
  std::string strategy = "random";
  std::uint64_t seed = 0;
  std::uint64_t step_cap = 1'000'000;
  std::string monitors;
  bool no_revisit = false;
  bool audit = false;
  std::string out_file;

  auto* run_cmd = app.add_subcommand("run", "run the firing process once");
  in.add_to(run_cmd, true);
  run_cmd->add_option("--strategy", strategy, "random, lex, max-diff or fifo");
  run_cmd->add_option("--seed", seed, "random seed")->envname("FLOWFIRE_SEED");
  run_cmd->add_option("--step-cap", step_cap, "maximum number of moves");
  run_cmd->add_option("--monitors", monitors,
                      "comma list of phi,psi,extrema,imbalance,chips,hole,lemma or all");
  run_cmd->add_flag("--no-revisit", no_revisit, "disable state revisit detection");
  run_cmd->add_flag("--audit", audit, "audit the trajectory afterwards");
  run_cmd->add_option("--out", out_file, "report file (default stdout)");

  std::uint64_t max_states = 5'000'000, max_depth = 1'000'000;
  std::string order = "dfs";
  unsigned workers = 1;
  auto* enum_cmd = app.add_subcommand("enumerate", "enumerate reachable terminal states");
  in.add_to(enum_cmd, true);
  enum_cmd->add_option("--max-states", max_states);
  enum_cmd->add_option("--max-depth", max_depth);
  enum_cmd->add_option("--order", order)->check(CLI::IsMember({"dfs", "bfs"}));
  enum_cmd->add_option("--workers", workers);
  enum_cmd->add_option("--out", out_file);

  std::int64_t k = 0;
  std::uint64_t trials = 100;
  std::vector<std::uint64_t> seeds;
  std::int64_t exhaustive_max_k = 2;
  std::uint64_t verify_states = 1'000'000;
  std::uint64_t verify_cap = 100'000;
  bool no_audit = false;
  std::string failure_out;
  auto* verify_cmd = app.add_subcommand(
      "verify-pyramid", "check that pulses end at the closed-form pyramid");
  in.add_to(verify_cmd, false);
  verify_cmd->add_option("--k", k, "pulse height")->required();
  verify_cmd->add_option("--trials", trials, "number of seeded runs");
  verify_cmd->add_option("--seed", seed, "first seed")->envname("FLOWFIRE_SEED");
  verify_cmd->add_option("--seeds", seeds, "explicit seeds (overrides --trials)")
      ->delimiter(',');
  verify_cmd->add_option("--exhaustive-max-k", exhaustive_max_k,
                         "enumerate exhaustively when k is at most this");
  verify_cmd->add_option("--max-states", verify_states, "enumeration cap");
  verify_cmd->add_option("--step-cap", verify_cap, "per-trial step cap");
  verify_cmd->add_option("--workers", workers, "parallel trials");
  verify_cmd->add_flag("--no-audit", no_audit, "skip trajectory audits");
  verify_cmd->add_option("--failure-out", failure_out,
                         "where to write the first failing trajectory");

  std::string to;
  auto* convert_cmd = app.add_subcommand("convert", "convert between representations");
  in.add_to(convert_cmd, true);
  convert_cmd->add_option("--to", to)->required()->check(CLI::IsMember({"edge", "face"}));
  convert_cmd->add_option("--out", out_file);

  auto* check_cmd = app.add_subcommand("check", "validate a complex and a configuration");
  in.add_to(check_cmd, false);

  std::string format = "ascii", window;
  auto* render_cmd = app.add_subcommand("render", "draw a configuration");
  in.add_to(render_cmd, true);
  render_cmd->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}));
  render_cmd->add_option("--window", window, "x0,y0,x1,y1 (faces, inclusive)");
  render_cmd->add_option("--out", out_file);

  std::string host = "127.0.0.1", persist;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "start the session server");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->add_option("--persist", persist, "directory for session logs");

  std::vector<const char*> argv{"flowfire"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*run_cmd) {
      return cmd_run(in, strategy, seed, step_cap, monitors, no_revisit, audit,
                     out_file, out, err);
    }
    if (*enum_cmd) {
      return cmd_enumerate(in, max_states, max_depth, order, workers, out_file,
                           out, err);
    }
    if (*verify_cmd) {
      return cmd_verify_pyramid(in, k, trials, seed, seeds, exhaustive_max_k,
                                verify_states, verify_cap, workers, !no_audit,
                                failure_out, out, err);
    }
    if (*convert_cmd) return cmd_convert(in, to, out_file, out);
    if (*check_cmd) return cmd_check(in, out);
    if (*render_cmd) return cmd_render(in, format, window, out_file, out);
    if (*serve_cmd) return cmd_serve(host, port, persist, out);
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what();
    if (e.witness()) err << " (witness " << *e.witness() << ")";
    err << "\n";
    return exit_code_for(e.code());
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace flowfire::cli
