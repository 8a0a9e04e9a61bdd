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

#include "fairmpc/share.hpp"

#include <vector>

#include "fairmpc/error.hpp"

namespace fairmpc {

const char* party_name(Party p) {
  return p == Party::kModeler ? "modeler" : "regulator";
}

std::pair<Share, Share> split(const RingMatrix& secret, Prg& rng) {
  RingMatrix mask(secret.rows(), secret.cols());
  for (auto& v : mask.values()) v = rng.next_u64();
  return {Share{Party::kModeler, secret - mask},
          Share{Party::kRegulator, std::move(mask)}};
}

RingMatrix reconstruct(const Share& a, const Share& b) {
  if (a.party == b.party) {
    throw Error(ErrorCode::kSameParty, "reconstruct needs one share per party");
  }
  return a.values + b.values;
}

Share trivial_share(Party self, Party holder, const RingMatrix& secret) {
  if (self == holder) return Share{self, secret};
  return Share{self, RingMatrix(secret.rows(), secret.cols())};
}

Share operator+(const Share& a, const Share& b) {
  return Share{a.party, a.values + b.values};
}

Share operator-(const Share& a, const Share& b) {
  return Share{a.party, a.values - b.values};
}

Share operator-(const Share& a) { return Share{a.party, -a.values}; }

Share add_public(const Share& a, const RingMatrix& constant) {
  if (a.party != Party::kModeler) {
    if (!a.values.same_shape(constant)) {
      throw Error(ErrorCode::kShapeMismatch, "add_public: shape mismatch");
    }
    return a;
  }
  return Share{a.party, a.values + constant};
}

Share add_public(const Share& a, Ring constant) {
  if (a.party != Party::kModeler) return a;
  Share out = a;
  for (auto& v : out.values.values()) v += constant;
  return out;
}

Share scale_public(const Share& a, Ring k) {
  return Share{a.party, scale(a.values, k)};
}

Share transposed(const Share& a) { return Share{a.party, a.values.transposed()}; }

Share row_block(const Share& a, std::size_t begin, std::size_t count) {
  return Share{a.party, a.values.row_block(begin, count)};
}

Share vstack(std::span<const Share> parts) {
  std::vector<RingMatrix> mats;
  mats.reserve(parts.size());
  for (const auto& p : parts) mats.push_back(p.values);
  return Share{parts.empty() ? Party::kModeler : parts.front().party,
               vstack(std::span<const RingMatrix>(mats))};
}

}  // namespace fairmpc
