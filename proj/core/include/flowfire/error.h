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

#ifndef FLOWFIRE_ERROR_H_
#define FLOWFIRE_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowfire {

enum class ErrorCode {
  kParse,
  kInvalidArgument,
  kInvalidComplex,
  kUnknownEdge,
  kUnknownFace,
  kUnknownVertex,
  kUnreachable,
  kUnsupported,
  kNotConservative,
  kInconsistentIntegration,
  kSupportOutsideWindow,
  kOverflow,
  kIllegalMove,
  kRepresentationMismatch,
  kMissingMonitor,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library. `witness` carries the offending cell
// (a vertex for NotConservative, an edge for UnknownEdge, ...) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::string> witness = std::nullopt)
      : std::runtime_error(what), code_(code), witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::string>& witness() const noexcept {
    return witness_;
  }

 private:
  ErrorCode code_;
  std::optional<std::string> witness_;
};

}  // namespace flowfire

#endif  // FLOWFIRE_ERROR_H_
