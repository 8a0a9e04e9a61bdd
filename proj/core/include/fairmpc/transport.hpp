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

// Message exchange between the two parties.
//
// Wire frame (all integers little-endian):
//
//   u32 length    number of bytes that follow (9 + 8 * payload words)
//   u8  tag       OPEN=1 SYNC=2 SHARE_IN=3 RESULT=4 ABORT=5
//   u64 step      per-session exchange counter, starts at 0
//   u64 payload[]
//
// Every exchange is symmetric: both parties send their frame for step k and
// then block on the peer's frame for step k. Mismatched step counters or tags
// raise kPeerDesync on both sides. An ABORT frame carries the sender's
// ErrorCode in payload[0].

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairmpc/digest.hpp"
#include "fairmpc/error.hpp"
#include "fairmpc/fixed_point.hpp"

namespace fairmpc {

enum class Tag : std::uint8_t {
  kOpen = 1,
  kSync = 2,
  kShareIn = 3,
  kResult = 4,
  kAbort = 5,
};

const char* tag_name(Tag tag);

struct Frame {
  Tag tag = Tag::kSync;
  std::uint64_t step = 0;
  std::vector<Ring> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);
// Throws kBadTag for an unknown tag and kIo for a malformed length.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Byte-level duplex link. exchange() sends one encoded frame and returns the
// next frame received from the peer.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::vector<std::uint8_t> exchange(std::span<const std::uint8_t> out) = 0;
  // Sends without waiting for a reply (used for ABORT).
  virtual void send_only(std::span<const std::uint8_t> out) = 0;
};

// Two connected endpoints sharing in-memory queues. Closing (destroying) one
// end makes the other's pending and future receives fail with kIo.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
make_in_process_pair();

// TCP endpoints. listen() accepts exactly one peer; connect() retries until
// the timeout elapses and then throws kIo.
std::unique_ptr<Transport> tcp_listen(const std::string& host, std::uint16_t port);
std::unique_ptr<Transport> tcp_connect(const std::string& host, std::uint16_t port,
                                       std::chrono::milliseconds timeout);
// Parses "host:port".
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& spec);

// Frame-level channel with the step counter and transcript.
class Channel {
 public:
  explicit Channel(Transport& transport) : transport_(transport) {}

  // Sends our frame for the current step and returns the peer's payload.
  std::vector<Ring> exchange(Tag tag, std::span<const Ring> payload);
  // Best effort; never throws.
  void abort(ErrorCode code) noexcept;

  std::uint64_t step() const { return step_; }
  std::uint64_t bytes_sent() const { return bytes_sent_; }
  // SHA-256 over every frame sent and received, in exchange order.
  std::string transcript_digest() const { return transcript_.hex(); }

  // Keeps a verbatim copy of the transcript bytes (tests only).
  void capture_transcript(bool on) { capture_ = on; }
  const std::vector<std::uint8_t>& captured() const { return captured_; }

 private:
  Transport& transport_;
  std::uint64_t step_ = 0;
  std::uint64_t bytes_sent_ = 0;
  Sha256 transcript_;
  bool capture_ = false;
  std::vector<std::uint8_t> captured_;
};

}  // namespace fairmpc
