/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairmpc {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto stable process exit codes (see tools/cli.cpp).
enum class ErrorCode {
  kOverflow,
  kShapeMismatch,
  kSameParty,
  kInsufficientEntropy,
  kTripleExhausted,
  kPeerDesync,
  kPeerAborted,
  kIo,
  kBadTag,
  kBadBlockSize,
  kBadShape,
  kNoCommitment,
  kSingularProjection,
  kInfeasibleIterate,
  kParseError,
  kNonBinaryLabel,
  kEmptyFile,
  kZeroVariance,
  kBadCorrelation,
  kBadFormat,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairmpc
