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


// The fairmpc command line: one subcommand per role of the deployment
// (dealer, users, modeler, regulator) plus plaintext baselines, sweeps and
// benchmarks.

#pragma once

#include <string>
#include <vector>

#include "fairmpc/error.hpp"

namespace fairmpc::cli {

// Process exit codes. These values are stable.
enum class Exit : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kIo = 3,               // connection, socket or file errors
  kPeerDesync = 4,       // step, tag or config mismatch with the peer
  kTripleExhausted = 5,  // pool too small or already used
  kOverflow = 6,         // model left the fixed-point range
  kData = 7,             // malformed input data or share files
  kPeerAborted = 8,      // the other party aborted
  kNoCommitment = 9,
  kInfeasibleIterate = 10,
};

Exit exit_for(ErrorCode code);

// args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace fairmpc::cli
