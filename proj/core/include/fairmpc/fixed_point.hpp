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

// Q16.16 fixed-point numbers embedded in the ring Z_{2^64}.
//
// A real value v is stored as round(v * 2^frac_bits) reduced mod 2^64, with
// negative values in two's complement. Ring addition of encodings is exact;
// a product of two encodings carries 2*frac_bits fractional bits and has to be
// shifted back with trunc(). Arithmetic inside the ring wraps silently; range
// checks happen only at encode/decode time.

#pragma once

#include <cstdint>

namespace fairmpc {

using Ring = std::uint64_t;

inline constexpr int kDefaultFracBits = 16;
inline constexpr int kDefaultIntBits = 16;

struct FixedPoint {
  Ring raw = 0;
  int frac_bits = kDefaultFracBits;

  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
};

// Largest magnitude (exclusive) representable with the given integer bits.
constexpr double fixed_range(int int_bits = kDefaultIntBits) {
  return static_cast<double>(std::uint64_t{1} << (int_bits - 1));
}

// Throws Error(kOverflow) when |v| >= 2^(int_bits-1) or v is not finite.
// Rounds to nearest, ties away from zero.
FixedPoint encode(double v, int frac_bits = kDefaultFracBits,
                  int int_bits = kDefaultIntBits);

Ring encode_raw(double v, int frac_bits = kDefaultFracBits,
                int int_bits = kDefaultIntBits);

double decode(FixedPoint x);
double decode_raw(Ring raw, int frac_bits = kDefaultFracBits);

// True when the signed value of raw decodes to a magnitude below the range.
bool in_range(Ring raw, int frac_bits = kDefaultFracBits,
              int int_bits = kDefaultIntBits);

constexpr std::int64_t as_signed(Ring x) { return static_cast<std::int64_t>(x); }
constexpr Ring as_ring(std::int64_t x) { return static_cast<Ring>(x); }

// Arithmetic (sign-preserving) right shift of the two's-complement value.
// bits must lie in [1, 62].
constexpr Ring trunc(Ring x, int bits) {
  return as_ring(as_signed(x) >> bits);
}

// Round-half-up shift: floor((x + 2^(bits-1)) / 2^bits).
constexpr Ring round_trunc(Ring x, int bits) {
  return trunc(x + (Ring{1} << (bits - 1)), bits);
}

// Sign bit of the two's-complement value.
constexpr Ring msb(Ring x) { return x >> 63; }

}  // namespace fairmpc
