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

#include "fairmpc/triples.hpp"

#include <algorithm>
#include <sstream>

#include "fairmpc/error.hpp"

namespace fairmpc {
namespace {

RingMatrix random_matrix(std::size_t rows, std::size_t cols, Prg& rng) {
  RingMatrix m(rows, cols);
  for (auto& v : m.values()) v = rng.next_u64();
  return m;
}

[[noreturn]] void exhausted(const char* what, std::size_t want,
                            std::size_t have) {
  std::ostringstream msg;
  msg << what << ": requested " << want << ", " << have << " left";
  throw Error(ErrorCode::kTripleExhausted, msg.str());
}

}  // namespace

std::pair<MatrixTriple, MatrixTriple> deal_matrix(std::size_t m, std::size_t k,
                                                  std::size_t l, Prg& rng) {
  RingMatrix a = random_matrix(m, k, rng);
  RingMatrix b = random_matrix(k, l, rng);
  RingMatrix c = matmul(a, b);
  MatrixTriple p2{random_matrix(m, k, rng), random_matrix(k, l, rng),
                  random_matrix(m, l, rng)};
  MatrixTriple p1{a - p2.a, b - p2.b, c - p2.c};
  return {std::move(p1), std::move(p2)};
}

DealSpec& DealSpec::operator+=(const DealSpec& other) {
  for (const auto& [shape, count] : other.matrix) matrix[shape] += count;
  hadamard += other.hadamard;
  comparisons += other.comparisons;
  odd_masks += other.odd_masks;
  return *this;
}

DealSpec operator*(DealSpec a, std::size_t times) {
  for (auto& [shape, count] : a.matrix) count *= times;
  a.hadamard *= times;
  a.comparisons *= times;
  a.odd_masks *= times;
  return a;
}

MatrixTriple TripleSet::matrix(std::size_t m, std::size_t k, std::size_t l) {
  const MatShape shape{m, k, l};
  auto it = matrix_pool.find(shape);
  std::size_t& cursor = matrix_cursor_[shape];
  const std::size_t have = it == matrix_pool.end() ? 0 : it->second.size();
  if (cursor >= have) exhausted("matrix triple", 1, 0);
  consumed_.matrix[shape] += 1;
  return std::move(it->second[cursor++]);
}

std::vector<HadamardTriple> TripleSet::hadamard(std::size_t count) {
  if (hadamard_cursor_ + count > hadamard_pool.size()) {
    exhausted("hadamard triple", count, hadamard_pool.size() - hadamard_cursor_);
  }
  std::vector<HadamardTriple> out(hadamard_pool.begin() + hadamard_cursor_,
                                  hadamard_pool.begin() + hadamard_cursor_ + count);
  hadamard_cursor_ += count;
  consumed_.hadamard += count;
  return out;
}

std::pair<std::vector<ConversionTuple>, std::vector<AndTriple>>
TripleSet::comparison(std::size_t count) {
  const std::size_t have =
      std::min(conversion_pool.size(), and_pool.size()) - comparison_cursor_;
  if (count > have) exhausted("comparison", count, have);
  auto first = static_cast<std::ptrdiff_t>(comparison_cursor_);
  auto last = first + static_cast<std::ptrdiff_t>(count);
  std::pair<std::vector<ConversionTuple>, std::vector<AndTriple>> out{
      {conversion_pool.begin() + first, conversion_pool.begin() + last},
      {and_pool.begin() + first, and_pool.begin() + last}};
  comparison_cursor_ += count;
  consumed_.comparisons += count;
  return out;
}

std::vector<Ring> TripleSet::odd_masks(std::size_t count) {
  if (odd_cursor_ + count > odd_pool.size()) {
    exhausted("odd mask", count, odd_pool.size() - odd_cursor_);
  }
  std::vector<Ring> out(odd_pool.begin() + odd_cursor_,
                        odd_pool.begin() + odd_cursor_ + count);
  odd_cursor_ += count;
  consumed_.odd_masks += count;
  return out;
}

DealSpec TripleSet::remaining() const {
  DealSpec left;
  for (const auto& [shape, pool] : matrix_pool) {
    auto it = matrix_cursor_.find(shape);
    const std::size_t used = it == matrix_cursor_.end() ? 0 : it->second;
    if (pool.size() > used) left.matrix[shape] = pool.size() - used;
  }
  left.hadamard = hadamard_pool.size() - hadamard_cursor_;
  left.comparisons =
      std::min(conversion_pool.size(), and_pool.size()) - comparison_cursor_;
  left.odd_masks = odd_pool.size() - odd_cursor_;
  return left;
}

std::pair<TripleSet, TripleSet> deal(const DealSpec& spec, Prg& rng) {
  TripleSet p1(Party::kModeler), p2(Party::kRegulator);
  for (const auto& [shape, count] : spec.matrix) {
    auto& pool1 = p1.matrix_pool[shape];
    auto& pool2 = p2.matrix_pool[shape];
    pool1.reserve(count);
    pool2.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto [t1, t2] = deal_matrix(shape.m, shape.k, shape.l, rng);
      pool1.push_back(std::move(t1));
      pool2.push_back(std::move(t2));
    }
  }
  p1.hadamard_pool.reserve(spec.hadamard);
  p2.hadamard_pool.reserve(spec.hadamard);
  for (std::size_t i = 0; i < spec.hadamard; ++i) {
    auto [t1, t2] = deal_hadamard<Ring>(rng);
    p1.hadamard_pool.push_back(t1);
    p2.hadamard_pool.push_back(t2);
  }
  p1.conversion_pool.reserve(spec.comparisons);
  p2.conversion_pool.reserve(spec.comparisons);
  p1.and_pool.reserve(spec.comparisons);
  p2.and_pool.reserve(spec.comparisons);
  for (std::size_t i = 0; i < spec.comparisons; ++i) {
    auto [c1, c2] = deal_conversion<Ring>(rng);
    auto [a1, a2] = deal_and(rng);
    p1.conversion_pool.push_back(c1);
    p2.conversion_pool.push_back(c2);
    p1.and_pool.push_back(a1);
    p2.and_pool.push_back(a2);
  }
  p1.odd_pool.reserve(spec.odd_masks);
  p2.odd_pool.reserve(spec.odd_masks);
  for (std::size_t i = 0; i < spec.odd_masks; ++i) {
    auto [r1, r2] = deal_odd_mask<Ring>(rng);
    p1.odd_pool.push_back(r1);
    p2.odd_pool.push_back(r2);
  }
  return {std::move(p1), std::move(p2)};
}

// ---------------------------------------------------------------------------
// StreamingDealer

struct StreamingDealer::Request {
  enum class Kind { kMatrix, kHadamard, kComparison, kOdd } kind;
  MatShape shape;
  std::size_t count = 0;
  bool operator==(const Request&) const = default;
};

struct StreamingDealer::Bundle {
  MatrixTriple matrix;
  std::vector<HadamardTriple> hadamard;
  std::vector<ConversionTuple> conversions;
  std::vector<AndTriple> ands;
  std::vector<Ring> odd;
};

struct StreamingDealer::Entry {
  Request request;
  Bundle half[2];
  bool taken[2] = {false, false};
};

class StreamingDealer::Endpoint final : public TripleSource {
 public:
  Endpoint(StreamingDealer& dealer, Party party) : dealer_(dealer), party_(party) {}

  MatrixTriple matrix(std::size_t m, std::size_t k, std::size_t l) override {
    consumed_.matrix[MatShape{m, k, l}] += 1;
    return std::move(
        dealer_.take(party_, {Request::Kind::kMatrix, {m, k, l}, 1}).matrix);
  }
  std::vector<HadamardTriple> hadamard(std::size_t count) override {
    consumed_.hadamard += count;
    return std::move(
        dealer_.take(party_, {Request::Kind::kHadamard, {}, count}).hadamard);
  }
  std::pair<std::vector<ConversionTuple>, std::vector<AndTriple>> comparison(
      std::size_t count) override {
    consumed_.comparisons += count;
    Bundle b = dealer_.take(party_, {Request::Kind::kComparison, {}, count});
    return {std::move(b.conversions), std::move(b.ands)};
  }
  std::vector<Ring> odd_masks(std::size_t count) override {
    consumed_.odd_masks += count;
    return std::move(dealer_.take(party_, {Request::Kind::kOdd, {}, count}).odd);
  }

 private:
  StreamingDealer& dealer_;
  Party party_;
};

StreamingDealer::StreamingDealer(std::uint64_t seed) : rng_(seed) {
  endpoints_[0] = std::make_unique<Endpoint>(*this, Party::kModeler);
  endpoints_[1] = std::make_unique<Endpoint>(*this, Party::kRegulator);
}

StreamingDealer::~StreamingDealer() = default;

TripleSource& StreamingDealer::endpoint(Party party) {
  return *endpoints_[party_index(party) - 1];
}

StreamingDealer::Entry StreamingDealer::generate(const Request& request) {
  Entry e;
  e.request = request;
  switch (request.kind) {
    case Request::Kind::kMatrix: {
      auto [t1, t2] =
          deal_matrix(request.shape.m, request.shape.k, request.shape.l, rng_);
      e.half[0].matrix = std::move(t1);
      e.half[1].matrix = std::move(t2);
      break;
    }
    case Request::Kind::kHadamard:
      for (std::size_t i = 0; i < request.count; ++i) {
        auto [t1, t2] = deal_hadamard<Ring>(rng_);
        e.half[0].hadamard.push_back(t1);
        e.half[1].hadamard.push_back(t2);
      }
      break;
    case Request::Kind::kComparison:
      for (std::size_t i = 0; i < request.count; ++i) {
        auto [c1, c2] = deal_conversion<Ring>(rng_);
        auto [a1, a2] = deal_and(rng_);
        e.half[0].conversions.push_back(c1);
        e.half[1].conversions.push_back(c2);
        e.half[0].ands.push_back(a1);
        e.half[1].ands.push_back(a2);
      }
      break;
    case Request::Kind::kOdd:
      for (std::size_t i = 0; i < request.count; ++i) {
        auto [r1, r2] = deal_odd_mask<Ring>(rng_);
        e.half[0].odd.push_back(r1);
        e.half[1].odd.push_back(r2);
      }
      break;
  }
  return e;
}

StreamingDealer::Bundle StreamingDealer::take(Party party,
                                              const Request& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  const int slot = party_index(party) - 1;
  const std::size_t index = cursor_[slot]++;
  if (index - base_ == entries_.size()) entries_.push_back(generate(request));
  Entry& entry = entries_[index - base_];
  if (!(entry.request == request)) {
    throw Error(ErrorCode::kPeerDesync,
                "parties requested different correlated randomness");
  }
  Bundle out = std::move(entry.half[slot]);
  entry.taken[slot] = true;
  while (!entries_.empty() && entries_.front().taken[0] &&
         entries_.front().taken[1]) {
    entries_.pop_front();
    ++base_;
  }
  return out;
}

}  // namespace fairmpc
