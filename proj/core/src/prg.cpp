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

#include "fairmpc/prg.hpp"

#include <sodium.h>

#include <cstring>

#include "fairmpc/error.hpp"

namespace fairmpc {
namespace {

void ensure_sodium() {
  if (sodium_init() < 0) {
    throw Error(ErrorCode::kInsufficientEntropy, "libsodium failed to initialize");
  }
}

}  // namespace

Prg::Prg(std::uint64_t seed) {
  ensure_sodium();
  unsigned char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<unsigned char>(seed >> (8 * i));
  crypto_generichash(key_.data(), key_.size(), seed_bytes, sizeof(seed_bytes),
                     nullptr, 0);
}

Prg::Prg(const std::array<unsigned char, 32>& key) : key_(key) {}

Prg Prg::from_entropy() {
  ensure_sodium();
  std::array<unsigned char, 32> key;
  randombytes_buf(key.data(), key.size());
  return Prg(key);
}

void Prg::refill() {
  static constexpr unsigned char kNonce[crypto_stream_chacha20_ietf_NONCEBYTES] = {};
  unsigned char bytes[sizeof(buffer_)];
  std::memset(bytes, 0, sizeof(bytes));
  // 64-byte ChaCha blocks; the IETF variant takes a 32-bit block counter, so
  // the high half of our counter goes into the nonce.
  unsigned char nonce[crypto_stream_chacha20_ietf_NONCEBYTES];
  std::memcpy(nonce, kNonce, sizeof(nonce));
  const std::uint64_t high = block_counter_ >> 32;
  for (int i = 0; i < 8; ++i) nonce[4 + i] = static_cast<unsigned char>(high >> (8 * i));
  crypto_stream_chacha20_ietf_xor_ic(bytes, bytes, sizeof(bytes), nonce,
                                     static_cast<std::uint32_t>(block_counter_),
                                     key_.data());
  block_counter_ += sizeof(bytes) / 64;
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    std::uint64_t w = 0;
    for (int b = 7; b >= 0; --b) w = (w << 8) | bytes[i * 8 + b];
    buffer_[i] = w;
  }
  pos_ = 0;
}

std::uint64_t Prg::next_u64() {
  if (pos_ == buffer_.size()) refill();
  return buffer_[pos_++];
}

double Prg::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Prg Prg::fork() {
  std::array<unsigned char, 32> key;
  unsigned char material[40];
  std::memcpy(material, key_.data(), 32);
  const std::uint64_t salt = next_u64();
  for (int i = 0; i < 8; ++i) material[32 + i] = static_cast<unsigned char>(salt >> (8 * i));
  crypto_generichash(key.data(), key.size(), material, sizeof(material), nullptr, 0);
  return Prg(key);
}

}  // namespace fairmpc
