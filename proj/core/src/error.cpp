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

#include "fairmpc/error.hpp"

namespace fairmpc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kSameParty: return "SameParty";
    case ErrorCode::kInsufficientEntropy: return "InsufficientEntropy";
    case ErrorCode::kTripleExhausted: return "TripleExhausted";
    case ErrorCode::kPeerDesync: return "PeerDesync";
    case ErrorCode::kPeerAborted: return "PeerAborted";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadTag: return "BadTag";
    case ErrorCode::kBadBlockSize: return "BadBlockSize";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kNoCommitment: return "NoCommitment";
    case ErrorCode::kSingularProjection: return "SingularProjection";
    case ErrorCode::kInfeasibleIterate: return "InfeasibleIterate";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kBadCorrelation: return "BadCorrelation";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fairmpc
