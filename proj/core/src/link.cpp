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

#include "fairmpc/link.hpp"

#include <algorithm>

namespace fairmpc {

const char* open_kind_name(OpenKind kind) {
  switch (kind) {
    case OpenKind::kBeaverMask: return "beaver-mask";
    case OpenKind::kComparisonMask: return "comparison-mask";
    case OpenKind::kBitMask: return "bit-mask";
    case OpenKind::kEqualityProduct: return "equality-product";
    case OpenKind::kVerdict: return "verdict";
    case OpenKind::kOutput: return "output";
    case OpenKind::kInputMask: return "input-mask";
    case OpenKind::kTruncLowBits: return "trunc-low-bits";
    case OpenKind::kCount: break;
  }
  return "?";
}

void Link::record(OpenKind kind, std::vector<Ring> values) {
  ++counts_[static_cast<std::size_t>(kind)];
  if (audit_) log_.push_back({kind, channel_.step() - 1, std::move(values)});
}

std::vector<std::uint64_t> Link::open_xor(std::span<const std::uint64_t> mine,
                                          OpenKind kind) {
  const auto theirs = channel_.exchange(Tag::kOpen, mine);
  if (theirs.size() != mine.size()) {
    throw Error(ErrorCode::kPeerDesync, "opening length differs from peer");
  }
  std::vector<std::uint64_t> out(mine.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mine[i] ^ theirs[i];
  record(kind, out);
  return out;
}

std::vector<Ring> Link::transfer(Party sender, Tag tag, std::span<const Ring> payload,
                                 OpenKind kind) {
  const bool sending = party_ == sender;
  std::vector<Ring> wire;
  if (sending) wire.assign(payload.begin(), payload.end());
  auto received = channel_.exchange(tag, wire);
  if (sending && !received.empty()) {
    throw Error(ErrorCode::kPeerDesync, "both parties sent in a one-way transfer");
  }
  record(kind, received);
  return received;
}

void Link::sync(std::span<const Ring> config) {
  const auto theirs = channel_.exchange(Tag::kSync, config);
  if (theirs.size() != config.size() ||
      !std::equal(theirs.begin(), theirs.end(), config.begin())) {
    throw Error(ErrorCode::kPeerDesync, "peer runs with a different public configuration");
  }
}

}  // namespace fairmpc
