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

// Both parties of a protocol in one process, for tests, benchmarks and
// sweeps. Data is distributed as in deployment: the data holder shares X and
// y trivially, users split Z between the two servers.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairmpc/attest.hpp"
#include "fairmpc/dataset.hpp"
#include "fairmpc/fairtrain.hpp"

namespace fairmpc {

struct LocalTrainResult {
  std::vector<Ring> theta_raw;
  std::vector<double> theta;
  // Reconstructed theta after each update, when requested.
  std::vector<std::vector<Ring>> trajectory;
  PairRunStats stats;
  double seconds = 0;  // online phase only
};

// Correlated randomness comes from a StreamingDealer seeded with
// dealer_seed; user sharing of Z uses a generator seeded with share_seed.
LocalTrainResult train_local(const Split& s, std::span<const double> slack,
                             const TrainConfig& cfg, const SessionOptions& options,
                             std::uint64_t dealer_seed, std::uint64_t share_seed,
                             bool record_trajectory = false);

struct LocalCertifyResult {
  bool fair = false;
  std::uint64_t violations = 0;
  std::optional<Commitment> modeler_half;
  std::optional<Commitment> regulator_half;
  PairRunStats stats;
  double seconds = 0;  // online phase only, pools are dealt beforehand
};

// The regulator holds X in the clear; Z is user-shared.
LocalCertifyResult certify_local(std::span<const Ring> theta_raw, const Split& s,
                                 std::span<const double> slack, const TrainConfig& cfg,
                                 const SessionOptions& options, std::uint64_t seed,
                                 std::uint64_t session_id = 1);

VerifyResult verify_local(std::span<const Ring> theta_prime, const Commitment& modeler_half,
                          const Commitment& regulator_half, std::span<const double> x_row,
                          int y_claimed, const SessionOptions& options, std::uint64_t seed);

}  // namespace fairmpc
