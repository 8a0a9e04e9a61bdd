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

// Additive secret sharing over Z_{2^64}.
//
// Party 1 is the modeler, party 2 the regulator. split() draws party 2's
// values uniformly and gives party 1 the difference, so either share alone is
// uniform and their ring sum is the secret.

#pragma once

#include <cstdint>
#include <utility>

#include "fairmpc/prg.hpp"
#include "fairmpc/ring_matrix.hpp"

namespace fairmpc {

enum class Party : std::uint8_t { kModeler = 1, kRegulator = 2 };

constexpr Party peer_of(Party p) {
  return p == Party::kModeler ? Party::kRegulator : Party::kModeler;
}
constexpr int party_index(Party p) { return static_cast<int>(p); }
const char* party_name(Party p);

struct Share {
  Party party = Party::kModeler;
  RingMatrix values;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
};

std::pair<Share, Share> split(const RingMatrix& secret, Prg& rng);
// Throws kShapeMismatch or kSameParty.
RingMatrix reconstruct(const Share& a, const Share& b);

// The sharing in which `holder` owns the whole secret and the peer holds zeros.
Share trivial_share(Party self, Party holder, const RingMatrix& secret);

// Local share arithmetic. Public constants are added by party 1 only.
Share operator+(const Share& a, const Share& b);
Share operator-(const Share& a, const Share& b);
Share operator-(const Share& a);
Share add_public(const Share& a, const RingMatrix& constant);
Share add_public(const Share& a, Ring constant);
Share scale_public(const Share& a, Ring k);
Share transposed(const Share& a);
Share row_block(const Share& a, std::size_t begin, std::size_t count);
Share vstack(std::span<const Share> parts);

}  // namespace fairmpc
