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

// Elementwise two-party protocols over Z_{2^w}, generic in the ring word so
// they can be checked exhaustively on an 8-bit ring.
//
// All functions take this party's shares and the correlated randomness they
// consume explicitly; the Session wraps them with pool bookkeeping.

#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairmpc/error.hpp"
#include "fairmpc/link.hpp"
#include "fairmpc/triples.hpp"

namespace fairmpc::proto {

template <class W>
inline constexpr int kWordBits = static_cast<int>(sizeof(W) * CHAR_BIT);

// Rounds used by secure_msb on a w-bit ring: one opening of x + rho, w - 2
// AND layers of the borrow chain, one daBit opening.
template <class W>
inline constexpr int kMsbRounds = kWordBits<W>;

namespace detail {

inline bool get_bit(const std::vector<std::uint64_t>& packed, std::size_t i) {
  return (packed[i / 64] >> (i % 64)) & 1;
}

inline void set_bit(std::vector<std::uint64_t>& packed, std::size_t i, bool v) {
  if (v) packed[i / 64] |= std::uint64_t{1} << (i % 64);
}

}  // namespace detail

// Beaver elementwise product: z = e*f + f*a + e*b + c with e = x - a and
// f = y - b opened. Exact in the ring.
template <class W>
std::vector<W> hadamard(Link& link, std::span<const W> x, std::span<const W> y,
                        std::span<const BasicHadamardTriple<W>> triples) {
  const std::size_t n = x.size();
  if (y.size() != n || triples.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "hadamard operands differ in length");
  }
  std::vector<W> masked(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    masked[i] = static_cast<W>(x[i] - triples[i].a);
    masked[n + i] = static_cast<W>(y[i] - triples[i].b);
  }
  const auto opened = link.open<W>(masked, OpenKind::kBeaverMask);
  std::vector<W> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const W e = opened[i], f = opened[n + i];
    W zi = static_cast<W>(f * triples[i].a + e * triples[i].b + triples[i].c);
    if (link.is_modeler()) zi = static_cast<W>(zi + e * f);
    z[i] = zi;
  }
  return z;
}

// Xor-shared AND of packed bit vectors using one lane of each AND triple.
inline std::vector<std::uint64_t> and_gates(Link& link,
                                            const std::vector<std::uint64_t>& u,
                                            const std::vector<std::uint64_t>& v,
                                            std::size_t count,
                                            std::span<const AndTriple> triples,
                                            int lane) {
  const std::size_t words = u.size();
  std::vector<std::uint64_t> a(words, 0), b(words, 0), c(words, 0);
  for (std::size_t i = 0; i < count; ++i) {
    detail::set_bit(a, i, (triples[i].a >> lane) & 1);
    detail::set_bit(b, i, (triples[i].b >> lane) & 1);
    detail::set_bit(c, i, (triples[i].c >> lane) & 1);
  }
  std::vector<std::uint64_t> masked(2 * words);
  for (std::size_t w = 0; w < words; ++w) {
    masked[w] = u[w] ^ a[w];
    masked[words + w] = v[w] ^ b[w];
  }
  const auto opened = link.open_xor(masked, OpenKind::kBitMask);
  std::vector<std::uint64_t> z(words);
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t d = opened[w], e = opened[words + w];
    z[w] = c[w] ^ (d & b[w]) ^ (e & a[w]);
    if (link.is_modeler()) z[w] ^= d & e;
  }
  return z;
}

// Arithmetic sharing of the two's-complement sign bit of each x.
//
// x + rho is opened (rho uniform, so this reveals nothing), then
// x = (x + rho) - rho is recomputed bit by bit against the xor-shared bits of
// rho with a ripple-borrow circuit. With the public minuend bit y_i the borrow
// recurrence needs one AND per bit:
//   y_i = 0: borrow' = rho_i | borrow = rho_i ^ borrow ^ (rho_i & borrow)
//   y_i = 1: borrow' = rho_i & borrow
// The xor-shared sign bit is finally converted to an arithmetic sharing with
// the tuple's daBit.
template <class W>
std::vector<W> secure_msb(Link& link, std::span<const W> x,
                          std::span<const BasicConversionTuple<W>> tuples,
                          std::span<const AndTriple> ands) {
  constexpr int kBits = kWordBits<W>;
  static_assert(kBits >= 3 && kBits <= 64);
  const std::size_t n = x.size();
  if (tuples.size() != n || ands.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "secure_msb: resource count mismatch");
  }
  if (n == 0) return {};
  std::vector<W> masked(n);
  for (std::size_t i = 0; i < n; ++i) masked[i] = static_cast<W>(x[i] + tuples[i].rho);
  const auto y = link.open<W>(masked, OpenKind::kComparisonMask);

  const std::size_t words = (n + 63) / 64;
  auto rho_bit = [&](int bit) {
    std::vector<std::uint64_t> packed(words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      detail::set_bit(packed, i, (tuples[i].rho_bits >> bit) & 1);
    }
    return packed;
  };
  auto public_bit = [&](int bit) {
    std::vector<std::uint64_t> packed(words, 0);
    for (std::size_t i = 0; i < n; ++i) detail::set_bit(packed, i, (y[i] >> bit) & 1);
    return packed;
  };

  // borrow into bit 1: rho_0 where y_0 = 0, else 0.
  std::vector<std::uint64_t> borrow = rho_bit(0);
  {
    const auto y0 = public_bit(0);
    for (std::size_t w = 0; w < words; ++w) borrow[w] &= ~y0[w];
  }
  for (int bit = 1; bit <= kBits - 2; ++bit) {
    const auto rho = rho_bit(bit);
    const auto yb = public_bit(bit);
    const auto t = and_gates(link, rho, borrow, n, ands, bit);
    for (std::size_t w = 0; w < words; ++w) {
      borrow[w] = (yb[w] & t[w]) | (~yb[w] & (rho[w] ^ borrow[w] ^ t[w]));
    }
  }
  std::vector<std::uint64_t> sign = rho_bit(kBits - 1);
  {
    const auto top = public_bit(kBits - 1);
    for (std::size_t w = 0; w < words; ++w) {
      sign[w] ^= borrow[w];
      if (link.is_modeler()) sign[w] ^= top[w];
    }
  }

  // daBit conversion: open c = sign ^ r, then sign = c + r - 2cr.
  std::vector<std::uint64_t> masked_bits(words, 0);
  for (std::size_t i = 0; i < n; ++i) {
    detail::set_bit(masked_bits, i, detail::get_bit(sign, i) ^ (tuples[i].dabit_xor & 1));
  }
  const auto c = link.open_xor(masked_bits, OpenKind::kBitMask);
  std::vector<W> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const W ci = detail::get_bit(c, i) ? W{1} : W{0};
    W share = static_cast<W>((W{1} - W{2} * ci) * tuples[i].dabit);
    if (link.is_modeler()) share = static_cast<W>(share + ci);
    out[i] = share;
  }
  return out;
}

struct EqualityResult {
  // Set only on the receiving party.
  std::optional<bool> equal;
  // The opened r_j * (x_j - y_j), receiving party only.
  std::vector<Ring> opened;
};

// Opens r_j * d_j to `receiver` for secret odd r_j; all zero iff d = 0, since
// odd r_j is invertible mod 2^w.
template <class W>
EqualityResult eq_test(Link& link, std::span<const W> diff,
                       std::span<const W> odd_masks,
                       std::span<const BasicHadamardTriple<W>> triples,
                       Party receiver) {
  if (odd_masks.size() != diff.size()) {
    throw Error(ErrorCode::kShapeMismatch, "eq_test: one odd mask per coordinate");
  }
  const auto products = hadamard<W>(link, odd_masks, diff, triples);
  const auto opened =
      link.open_to<W>(receiver, products, OpenKind::kEqualityProduct);
  EqualityResult result;
  if (opened) {
    bool all_zero = true;
    for (W v : *opened) {
      all_zero = all_zero && v == 0;
      result.opened.push_back(v);
    }
    result.equal = all_zero;
  }
  return result;
}

}  // namespace fairmpc::proto
