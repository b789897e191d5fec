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

#ifndef FLOWFIRE_IO_H_
#define FLOWFIRE_IO_H_

#include <nlohmann/json.hpp>

#include <string>

#include "flowfire/analysis.h"
#include "flowfire/complex.h"
#include "flowfire/engine.h"

// JSON wire formats shared by the CLI and the session server. Object keys
// come out sorted, so equal values serialize byte-identically.
namespace flowfire::io {

using nlohmann::json;

// {"kind":"grid"} | {"kind":"ndgrid","n":3} |
// {"kind":"planar","edges":[[t,h],...],"faces":[[[e,s],...],...],
//  "external":i}, each with an optional "distinguished" cell identifier.
Complex complex_from_json(const json& j);
json complex_to_json(const Complex& complex);

// {"representation":"edge"|"face","entries":[[cell,value],...]}; values
// must be nonzero and cells unique.
State state_from_json(const json& j);
json state_to_json(const State& state);

json move_to_json(const Move& move);
Move move_from_json(const json& j);

json report_to_json(const RunReport& report);
RunReport report_from_json(const json& j);

json terminal_set_to_json(const TerminalSet& set);
json diamond_to_json(const DiamondViolation& violation);
json criterion_to_json(const CriterionResult& result);
json audit_to_json(const AuditResult& result);

// Reads and parses a JSON file; Error(kParse) on I/O or syntax failure.
json read_json_file(const std::string& path);

}  // namespace flowfire::io

#endif  // FLOWFIRE_IO_H_
