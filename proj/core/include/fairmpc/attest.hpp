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

// Certification and verification of a model held by the modeler.
//
// Instead of hashing the model inside the computation, certification leaves
// the model secret-shared: after a fair verdict the sharing is re-randomized
// and each party keeps its half. The regulator's half is the commitment.
// Verification checks a freshly input model against the committed sharing
// with the randomized equality test, so the regulator never sees theta and
// the modeler cannot swap models undetected. On a mismatch the regulator
// learns only the 2-adic valuation of each coordinate difference.
//
// The modeler keeps its companion half as well; in the semi-honest model it
// presents that half unchanged at verification time.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "fairmpc/fairtrain.hpp"

namespace fairmpc {

struct Commitment {
  std::uint64_t session_id = 0;
  std::int64_t created_unix = 0;
  Share theta;  // this party's half of the certified model, d x 1

  std::size_t dimension() const { return theta.rows(); }
};

void save_commitment(const std::filesystem::path& path, const Commitment& c);
// Throws kNoCommitment when the file does not exist.
Commitment load_commitment(const std::filesystem::path& path);

struct CertifyResult {
  // Regulator only.
  std::optional<bool> fair;
  std::optional<std::uint64_t> violations;
  // The modeler always gets its companion half; the regulator gets the
  // commitment only for a fair model.
  std::optional<Commitment> commitment;
};

// theta is the modeler's plaintext model (nullptr on the regulator). x and z
// are this party's shares of the certification data; the block size of cfg
// selects the constraint product. Both parties pass the same session id.
CertifyResult certify(Session& s, const RingMatrix* theta, std::size_t d,
                      const Share& x, const Share& z, std::span<const double> slack,
                      const TrainConfig& cfg, std::uint64_t session_id, Prg& rng);

struct VerifyResult {
  // Regulator only; decision_match is empty when the model did not match.
  std::optional<bool> model_match;
  std::optional<bool> decision_match;
};

// theta_prime: modeler's plaintext model (nullptr on the regulator).
// committed: this party's half of the certified model.
// x, y_claimed: the user's features (1 x d, fixed point) and the decision
// the user received; regulator only.
VerifyResult verify(Session& s, const RingMatrix* theta_prime, const Commitment& committed,
                    const RingMatrix* x, std::optional<int> y_claimed, Prg& rng);

DealSpec certify_consumption(std::size_t n, std::size_t d, std::size_t p,
                             const TrainConfig& cfg);
DealSpec verify_consumption(std::size_t d);

}  // namespace fairmpc
