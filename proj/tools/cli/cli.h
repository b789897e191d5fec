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

#ifndef FLOWFIRE_TOOLS_CLI_CLI_H_
#define FLOWFIRE_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace flowfire::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitIllegalConfiguration = 2;
inline constexpr int kExitStepCap = 3;
inline constexpr int kExitRevisit = 4;
inline constexpr int kExitVerificationFailed = 5;

// Entry point of the `flowfire` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace flowfire::cli

#endif  // FLOWFIRE_TOOLS_CLI_CLI_H_
