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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairmpc/share.hpp"
#include "fairmpc/transport.hpp"

namespace fairmpc {

// Why a value was revealed. Recorded for every opening so that a transcript
// auditor can check that nothing outside this list is ever made public.
enum class OpenKind : std::uint8_t {
  kBeaverMask,       // x - a, y - b of a Beaver multiplication
  kComparisonMask,   // x + rho before bit decomposition
  kBitMask,          // masked bits of an AND gate or a daBit conversion
  kEqualityProduct,  // r * (x - y) of the equality test
  kVerdict,          // aggregate certification / verification result
  kOutput,           // a protocol output revealed on purpose
  kInputMask,        // the peer's share of a freshly input value
  kTruncLowBits,     // low share bits moved by the deterministic truncation hook
  kCount,
};

const char* open_kind_name(OpenKind kind);

struct OpenRecord {
  OpenKind kind;
  std::uint64_t step;
  std::vector<Ring> values;  // what this party learned
};

// A party's end of a protocol run: its identity plus the framed channel.
// Every opening goes through here and is logged.
class Link {
 public:
  Link(Party party, Channel& channel) : party_(party), channel_(channel) {}

  Party party() const { return party_; }
  bool is_modeler() const { return party_ == Party::kModeler; }
  Channel& channel() { return channel_; }

  // Both parties learn the ring sum of their inputs.
  template <class W>
  std::vector<W> open(std::span<const W> mine, OpenKind kind) {
    std::vector<Ring> wire(mine.begin(), mine.end());
    const auto theirs = channel_.exchange(Tag::kOpen, wire);
    if (theirs.size() != mine.size()) {
      throw Error(ErrorCode::kPeerDesync, "opening length differs from peer");
    }
    std::vector<W> out(mine.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<W>(mine[i] + static_cast<W>(theirs[i]));
    }
    record(kind, {out.begin(), out.end()});
    return out;
  }

  // Both parties learn the xor of their inputs.
  std::vector<std::uint64_t> open_xor(std::span<const std::uint64_t> mine,
                                      OpenKind kind);

  // Only `receiver` learns the sum; the other party sends its share and gets
  // nothing back.
  template <class W>
  std::optional<std::vector<W>> open_to(Party receiver, std::span<const W> mine,
                                        OpenKind kind) {
    const bool receiving = party_ == receiver;
    std::vector<Ring> wire;
    if (!receiving) wire.assign(mine.begin(), mine.end());
    const auto theirs = channel_.exchange(Tag::kResult, wire);
    if (!receiving) {
      if (!theirs.empty()) {
        throw Error(ErrorCode::kPeerDesync, "unexpected payload in one-way opening");
      }
      record(kind, {});
      return std::nullopt;
    }
    if (theirs.size() != mine.size()) {
      throw Error(ErrorCode::kPeerDesync, "opening length differs from peer");
    }
    std::vector<W> out(mine.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<W>(mine[i] + static_cast<W>(theirs[i]));
    }
    record(kind, {out.begin(), out.end()});
    return out;
  }

  // `sender` transmits `payload` to the peer; returns what this party received.
  std::vector<Ring> transfer(Party sender, Tag tag, std::span<const Ring> payload,
                             OpenKind kind);

  // Exchanges a public configuration digest; mismatch is a desync.
  void sync(std::span<const Ring> config);

  void set_audit(bool on) { audit_ = on; }
  const std::vector<OpenRecord>& audit_log() const { return log_; }
  std::uint64_t openings(OpenKind kind) const {
    return counts_[static_cast<std::size_t>(kind)];
  }

 private:
  void record(OpenKind kind, std::vector<Ring> values);

  Party party_;
  Channel& channel_;
  bool audit_ = false;
  std::vector<OpenRecord> log_;
  std::array<std::uint64_t, static_cast<std::size_t>(OpenKind::kCount)> counts_{};
};

}  // namespace fairmpc
