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

// Operations on shared values for one party of a two-party session.
//
// A Session owns nothing: it borrows the channel and the triple source and
// must be driven in lockstep with the peer's Session. Every method that
// communicates performs exactly one exchange unless documented otherwise, so
// callers batch independent work (mul_many, msb_many, ...) to save rounds.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairmpc/link.hpp"
#include "fairmpc/prg.hpp"
#include "fairmpc/share.hpp"
#include "fairmpc/triples.hpp"

namespace fairmpc {

enum class TruncationMode {
  // Each party shifts its own share: party 1 rounds down, party 2 rounds its
  // negated share down. Unbiased stochastic rounding, error in {0, +1} ulp
  // relative to floor.
  kProbabilistic,
  // Test hook: party 2 hands its low bits to party 1 so that the result is
  // exactly round_trunc() of the plaintext (except with probability ~2^-31
  // per element). One extra exchange per truncation batch.
  kDeterministic,
};

struct SessionOptions {
  int frac_bits = kDefaultFracBits;
  TruncationMode truncation = TruncationMode::kProbabilistic;
  // Keep every opened value in the Link audit log.
  bool audit = false;
};

class Session {
 public:
  Session(Party party, Channel& channel, TripleSource& triples,
          SessionOptions options = {});

  Party party() const { return link_.party(); }
  bool is_modeler() const { return link_.is_modeler(); }
  int frac_bits() const { return options_.frac_bits; }
  const SessionOptions& options() const { return options_; }
  Link& link() { return link_; }
  Channel& channel() { return link_.channel(); }
  TripleSource& triples() { return triples_; }

  // Both parties learn the value.
  RingMatrix open(const Share& x, OpenKind kind = OpenKind::kOutput);
  // Only `receiver` learns the value.
  std::optional<RingMatrix> open_to(Party receiver, const Share& x,
                                    OpenKind kind = OpenKind::kOutput);

  // `owner` secret-shares a rows x cols matrix it knows; the peer passes
  // nullptr. The owner keeps secret - mask and sends the uniform mask.
  Share input(Party owner, const RingMatrix* secret, std::size_t rows,
              std::size_t cols, Prg& rng);

  // Exact ring matrix products, one Beaver round for the whole batch.
  std::vector<Share> mul_many(std::span<const std::pair<Share, Share>> pairs);
  Share mul(const Share& x, const Share& y);

  // Exact elementwise products, one Beaver round for the whole batch.
  std::vector<Share> hadamard_many(std::span<const std::pair<Share, Share>> pairs);
  Share hadamard(const Share& x, const Share& y);

  // Divides by 2^bits. Local in probabilistic mode; one exchange for the
  // whole batch in deterministic mode.
  std::vector<Share> trunc_many(std::span<const std::pair<Share, int>> items);
  Share trunc(const Share& x, int bits);

  // Arithmetic sharing of the sign bit, one comparison per element, one
  // secure_msb run (64 rounds) for the whole batch.
  std::vector<Share> msb_many(std::span<const Share> xs);
  Share msb(const Share& x);

  // True iff x == y, revealed to `receiver` only.
  std::optional<bool> eq_test(const Share& x, const Share& y, Party receiver);

  // (1/n) * Zc * X for Zc (p x n) and X (n x d), computed as n/b block
  // products each shifted by f + log2(b), then the sum shifted by log2(n/b).
  // The block products share one Beaver round. A block larger than n is
  // clamped to n. Throws kBadBlockSize unless b and n/b are powers of two.
  Share blocked_mult_shift_avg(const Share& zc, const Share& x, std::size_t block);

  // Three-piece linear sigmoid: 0 below -1/2, v + 1/2 in between, 1 above.
  Share sigmoid_pw(const Share& v);

 private:
  Link link_;
  TripleSource& triples_;
  SessionOptions options_;
};

// True iff n is a power of two (n >= 1).
constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
int log2_exact(std::size_t n);

// Runs both parties against each other over an in-process transport, the
// modeler on a worker thread. If either side throws, its end aborts the
// channel and the first root-cause error is rethrown after both finish.
struct PairRunStats {
  std::uint64_t steps = 0;
  std::uint64_t bytes_modeler = 0;
  std::uint64_t bytes_regulator = 0;
  std::string transcript_modeler;
  std::string transcript_regulator;
};

PairRunStats run_two_party(TripleSource& modeler_triples,
                           TripleSource& regulator_triples,
                           const SessionOptions& options,
                           const std::function<void(Session&)>& modeler,
                           const std::function<void(Session&)>& regulator);

}  // namespace fairmpc
