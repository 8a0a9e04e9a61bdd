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

// Correlated randomness produced by a trusted dealer in an offline phase.
//
// The dealer replaces OT/HE-based triple generation; it sees every secret it
// produces and must not collude with either party (semi-honest model).
// Secure comparison uses conversion tuples (edaBit-style: a ring element held
// both additively and as xor-shared bits, plus a random bit held both ways)
// and bit-sliced AND triples, instead of garbled circuits.
//
// Every object below is one party's view. The deal_* templates are
// parameterized on the ring word so the comparison and equality protocols can
// run over a small ring for exhaustive testing.

#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fairmpc/prg.hpp"
#include "fairmpc/ring_matrix.hpp"
#include "fairmpc/share.hpp"

namespace fairmpc {

// Beaver triple at matrix level: A (m x k), B (k x l), C = A * B (m x l).
struct MatrixTriple {
  RingMatrix a, b, c;
};

template <class W>
struct BasicHadamardTriple {
  W a = 0, b = 0, c = 0;
};

// Arithmetic share of rho, xor share of rho's bits, and a random bit r shared
// both arithmetically and by xor.
template <class W>
struct BasicConversionTuple {
  W rho = 0;
  W rho_bits = 0;
  W dabit = 0;
  std::uint8_t dabit_xor = 0;
};

// 64 independent AND triples packed into bit lanes: c = a & b after xor
// reconstruction. One word serves the whole borrow chain of one comparison.
struct AndTriple {
  std::uint64_t a = 0, b = 0, c = 0;
};

using HadamardTriple = BasicHadamardTriple<Ring>;
using ConversionTuple = BasicConversionTuple<Ring>;

template <class W, class Rng>
W uniform_word(Rng& rng) {
  return static_cast<W>(rng.next_u64());
}

template <class W, class Rng>
std::pair<BasicHadamardTriple<W>, BasicHadamardTriple<W>> deal_hadamard(Rng& rng) {
  const W a = uniform_word<W>(rng), b = uniform_word<W>(rng);
  const W c = static_cast<W>(a * b);
  BasicHadamardTriple<W> p2{uniform_word<W>(rng), uniform_word<W>(rng),
                            uniform_word<W>(rng)};
  BasicHadamardTriple<W> p1{static_cast<W>(a - p2.a), static_cast<W>(b - p2.b),
                            static_cast<W>(c - p2.c)};
  return {p1, p2};
}

template <class W, class Rng>
std::pair<BasicConversionTuple<W>, BasicConversionTuple<W>> deal_conversion(Rng& rng) {
  const W rho = uniform_word<W>(rng);
  const W bit = static_cast<W>(rng.next_u64() & 1);
  BasicConversionTuple<W> p2{uniform_word<W>(rng), uniform_word<W>(rng),
                             uniform_word<W>(rng),
                             static_cast<std::uint8_t>(rng.next_u64() & 1)};
  BasicConversionTuple<W> p1{static_cast<W>(rho - p2.rho),
                             static_cast<W>(rho ^ p2.rho_bits),
                             static_cast<W>(bit - p2.dabit),
                             static_cast<std::uint8_t>(bit ^ p2.dabit_xor)};
  return {p1, p2};
}

// Shares of a uniformly random odd ring element.
template <class W, class Rng>
std::pair<W, W> deal_odd_mask(Rng& rng) {
  const W r = static_cast<W>(uniform_word<W>(rng) | W{1});
  const W p2 = uniform_word<W>(rng);
  return {static_cast<W>(r - p2), p2};
}

template <class Rng>
std::pair<AndTriple, AndTriple> deal_and(Rng& rng) {
  const std::uint64_t a = rng.next_u64(), b = rng.next_u64();
  AndTriple p2{rng.next_u64(), rng.next_u64(), rng.next_u64()};
  AndTriple p1{a ^ p2.a, b ^ p2.b, (a & b) ^ p2.c};
  return {p1, p2};
}

std::pair<MatrixTriple, MatrixTriple> deal_matrix(std::size_t m, std::size_t k,
                                                  std::size_t l, Prg& rng);

struct MatShape {
  std::size_t m = 0, k = 0, l = 0;
  auto operator<=>(const MatShape&) const = default;
};

// Counts of every kind of correlated randomness. One comparison consumes one
// ConversionTuple and one AndTriple word; one equality-tested coordinate
// consumes one odd mask and one HadamardTriple.
struct DealSpec {
  std::map<MatShape, std::size_t> matrix;
  std::size_t hadamard = 0;
  std::size_t comparisons = 0;
  std::size_t odd_masks = 0;

  DealSpec& operator+=(const DealSpec& other);
  friend DealSpec operator+(DealSpec a, const DealSpec& b) { return a += b; }
  friend DealSpec operator*(DealSpec a, std::size_t times);
  friend bool operator==(const DealSpec&, const DealSpec&) = default;
};

// Supplies one party's correlated randomness during an online session.
// Requests are strictly sequential; nothing is ever handed out twice.
class TripleSource {
 public:
  virtual ~TripleSource() = default;

  virtual MatrixTriple matrix(std::size_t m, std::size_t k, std::size_t l) = 0;
  virtual std::vector<HadamardTriple> hadamard(std::size_t count) = 0;
  // count comparisons: count conversion tuples and count AND words.
  virtual std::pair<std::vector<ConversionTuple>, std::vector<AndTriple>>
  comparison(std::size_t count) = 0;
  virtual std::vector<Ring> odd_masks(std::size_t count) = 0;

  const DealSpec& consumed() const { return consumed_; }

 protected:
  DealSpec consumed_;
};

// Pre-dealt pools for one party, consumed front to back.
class TripleSet final : public TripleSource {
 public:
  explicit TripleSet(Party party) : party_(party) {}

  Party party() const { return party_; }

  MatrixTriple matrix(std::size_t m, std::size_t k, std::size_t l) override;
  std::vector<HadamardTriple> hadamard(std::size_t count) override;
  std::pair<std::vector<ConversionTuple>, std::vector<AndTriple>> comparison(
      std::size_t count) override;
  std::vector<Ring> odd_masks(std::size_t count) override;

  // What is left to consume.
  DealSpec remaining() const;

  // Pools are public so the dealer and the file layer can fill them.
  std::map<MatShape, std::vector<MatrixTriple>> matrix_pool;
  std::vector<HadamardTriple> hadamard_pool;
  std::vector<ConversionTuple> conversion_pool;
  std::vector<AndTriple> and_pool;
  std::vector<Ring> odd_pool;

 private:
  Party party_;
  std::map<MatShape, std::size_t> matrix_cursor_;
  std::size_t hadamard_cursor_ = 0;
  std::size_t comparison_cursor_ = 0;
  std::size_t odd_cursor_ = 0;
};

// Deals both parties' pools. Identical seeds give bitwise identical pools.
std::pair<TripleSet, TripleSet> deal(const DealSpec& spec, Prg& rng);

// An in-process dealer that produces correlated randomness on demand, for
// long runs whose pools would not fit in memory. Both endpoints must issue
// the same request sequence; divergence throws kPeerDesync. Thread-safe.
class StreamingDealer {
 public:
  explicit StreamingDealer(std::uint64_t seed);
  ~StreamingDealer();
  StreamingDealer(const StreamingDealer&) = delete;
  StreamingDealer& operator=(const StreamingDealer&) = delete;

  TripleSource& endpoint(Party party);

 private:
  class Endpoint;
  struct Request;
  struct Bundle;
  struct Entry;

  Bundle take(Party party, const Request& request);
  Entry generate(const Request& request);

  std::mutex mutex_;
  Prg rng_;
  std::deque<Entry> entries_;
  std::size_t base_ = 0;
  std::size_t cursor_[2] = {0, 0};
  std::unique_ptr<Endpoint> endpoints_[2];
};

}  // namespace fairmpc
