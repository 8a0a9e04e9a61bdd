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
#include <limits>

namespace fairmpc {

// ChaCha20 keystream generator (libsodium). Seeded generators are
// reproducible bit-for-bit; from_entropy() draws the key from the OS.
// Satisfies UniformRandomBitGenerator.
class Prg {
 public:
  using result_type = std::uint64_t;

  explicit Prg(std::uint64_t seed);
  // Throws Error(kInsufficientEntropy) if the system RNG is unavailable.
  static Prg from_entropy();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit();
  // Derives an independent generator; the parent stream advances by one word.
  Prg fork();

 private:
  explicit Prg(const std::array<unsigned char, 32>& key);
  void refill();

  std::array<unsigned char, 32> key_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 64> buffer_{};
  std::size_t pos_ = buffer_.size();
};

}  // namespace fairmpc
