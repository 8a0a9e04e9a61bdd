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

#include "fairmpc/mpc.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <thread>

#include "fairmpc/protocols.hpp"

namespace fairmpc {

namespace {

std::vector<Ring> flatten(std::span<const Share> xs) {
  std::vector<Ring> out;
  for (const auto& x : xs) out.insert(out.end(), x.values.data().begin(), x.values.data().end());
  return out;
}

// Splits a flat vector back into matrices shaped like `like`.
std::vector<Share> unflatten(Party party, const std::vector<Ring>& flat,
                             std::span<const Share> like) {
  std::vector<Share> out;
  out.reserve(like.size());
  std::size_t pos = 0;
  for (const auto& x : like) {
    std::vector<Ring> part(flat.begin() + pos, flat.begin() + pos + x.values.size());
    pos += x.values.size();
    out.push_back({party, RingMatrix(x.rows(), x.cols(), std::move(part))});
  }
  return out;
}

void check_party(const Session& s, const Share& x) {
  if (x.party != s.party()) {
    throw Error(ErrorCode::kSameParty, "share belongs to the other party");
  }
}

}  // namespace

int log2_exact(std::size_t n) {
  if (!is_pow2(n)) throw Error(ErrorCode::kBadShape, "not a power of two");
  return std::countr_zero(n);
}

Session::Session(Party party, Channel& channel, TripleSource& triples,
                 SessionOptions options)
    : link_(party, channel), triples_(triples), options_(options) {
  link_.set_audit(options_.audit);
}

RingMatrix Session::open(const Share& x, OpenKind kind) {
  check_party(*this, x);
  auto v = link_.open<Ring>(x.values.values(), kind);
  return RingMatrix(x.rows(), x.cols(), std::move(v));
}

std::optional<RingMatrix> Session::open_to(Party receiver, const Share& x,
                                           OpenKind kind) {
  check_party(*this, x);
  auto v = link_.open_to<Ring>(receiver, x.values.values(), kind);
  if (!v) return std::nullopt;
  return RingMatrix(x.rows(), x.cols(), std::move(*v));
}

Share Session::input(Party owner, const RingMatrix* secret, std::size_t rows,
                     std::size_t cols, Prg& rng) {
  const bool owning = owner == party();
  std::vector<Ring> mask;
  if (owning) {
    if (secret == nullptr || secret->rows() != rows || secret->cols() != cols) {
      throw Error(ErrorCode::kShapeMismatch, "input secret does not match its declared shape");
    }
    mask.resize(rows * cols);
    for (auto& m : mask) m = rng.next_u64();
  }
  auto received = link_.transfer(owner, Tag::kShareIn, mask, OpenKind::kInputMask);
  if (owning) {
    RingMatrix mine = *secret;
    for (std::size_t i = 0; i < mine.size(); ++i) mine[i] -= mask[i];
    return {party(), std::move(mine)};
  }
  if (received.size() != rows * cols) {
    throw Error(ErrorCode::kPeerDesync, "input share has the wrong length");
  }
  return {party(), RingMatrix(rows, cols, std::move(received))};
}

std::vector<Share> Session::mul_many(std::span<const std::pair<Share, Share>> pairs) {
  std::vector<MatrixTriple> triples;
  std::vector<Ring> masked;
  for (const auto& [x, y] : pairs) {
    check_party(*this, x);
    check_party(*this, y);
    if (x.cols() != y.rows()) {
      throw Error(ErrorCode::kShapeMismatch, "mul: inner dimensions differ");
    }
    triples.push_back(triples_.matrix(x.rows(), x.cols(), y.cols()));
    const auto& t = triples.back();
    const auto e = x.values - t.a;
    const auto f = y.values - t.b;
    masked.insert(masked.end(), e.data().begin(), e.data().end());
    masked.insert(masked.end(), f.data().begin(), f.data().end());
  }
  const auto opened = link_.open<Ring>(masked, OpenKind::kBeaverMask);
  std::vector<Share> out;
  std::size_t pos = 0;
  auto take = [&](std::size_t r, std::size_t c) {
    std::vector<Ring> v(opened.begin() + pos, opened.begin() + pos + r * c);
    pos += r * c;
    return RingMatrix(r, c, std::move(v));
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const auto& t = triples[i];
    const auto e = take(x.rows(), x.cols());
    const auto f = take(y.rows(), y.cols());
    RingMatrix z = matmul(e, t.b) + matmul(t.a, f) + t.c;
    if (is_modeler()) z += matmul(e, f);
    out.push_back({party(), std::move(z)});
  }
  return out;
}

Share Session::mul(const Share& x, const Share& y) {
  const std::pair<Share, Share> p{x, y};
  return std::move(mul_many({&p, 1}).front());
}

std::vector<Share> Session::hadamard_many(
    std::span<const std::pair<Share, Share>> pairs) {
  std::vector<Share> lhs, rhs;
  for (const auto& [x, y] : pairs) {
    check_party(*this, x);
    check_party(*this, y);
    if (!x.values.same_shape(y.values)) {
      throw Error(ErrorCode::kShapeMismatch, "hadamard: operand shapes differ");
    }
    lhs.push_back(x);
    rhs.push_back(y);
  }
  const auto a = flatten(lhs), b = flatten(rhs);
  const auto triples = triples_.hadamard(a.size());
  const auto z = proto::hadamard<Ring>(link_, a, b, triples);
  return unflatten(party(), z, lhs);
}

Share Session::hadamard(const Share& x, const Share& y) {
  const std::pair<Share, Share> p{x, y};
  return std::move(hadamard_many({&p, 1}).front());
}

std::vector<Share> Session::trunc_many(std::span<const std::pair<Share, int>> items) {
  for (const auto& [x, bits] : items) {
    check_party(*this, x);
    if (bits < 1 || bits > 62) throw Error(ErrorCode::kInvalidArgument, "trunc bits out of range");
  }
  std::vector<Share> out;
  if (options_.truncation == TruncationMode::kProbabilistic) {
    for (const auto& [x, bits] : items) {
      Share s{party(), x.values};
      for (auto& v : s.values.values()) {
        v = is_modeler() ? fairmpc::trunc(v, bits) : Ring{0} - fairmpc::trunc(Ring{0} - v, bits);
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  // Deterministic hook: party 2 moves its low bits to party 1, so party 2's
  // share becomes an exact multiple of 2^bits and party 1 can round the sum.
  std::vector<Ring> low;
  if (!is_modeler()) {
    for (const auto& [x, bits] : items) {
      const Ring mask = (Ring{1} << bits) - 1;
      for (Ring v : x.values.data()) low.push_back(v & mask);
    }
  }
  const auto received =
      link_.transfer(Party::kRegulator, Tag::kShareIn, low, OpenKind::kTruncLowBits);
  std::size_t pos = 0;
  for (const auto& [x, bits] : items) {
    Share s{party(), x.values};
    const Ring half = Ring{1} << (bits - 1);
    for (auto& v : s.values.values()) {
      if (is_modeler()) {
        if (pos >= received.size()) {
          throw Error(ErrorCode::kPeerDesync, "truncation hook payload too short");
        }
        v = fairmpc::trunc(v + received[pos] + half, bits);
      } else {
        v = fairmpc::trunc(v - low[pos], bits);
      }
      ++pos;
    }
    out.push_back(std::move(s));
  }
  if (is_modeler() && pos != received.size()) {
    throw Error(ErrorCode::kPeerDesync, "truncation hook payload length mismatch");
  }
  return out;
}

Share Session::trunc(const Share& x, int bits) {
  const std::pair<Share, int> item{x, bits};
  return std::move(trunc_many({&item, 1}).front());
}

std::vector<Share> Session::msb_many(std::span<const Share> xs) {
  for (const auto& x : xs) check_party(*this, x);
  const auto flat = flatten(xs);
  auto [tuples, ands] = triples_.comparison(flat.size());
  const auto bits = proto::secure_msb<Ring>(link_, flat, tuples, ands);
  return unflatten(party(), bits, xs);
}

Share Session::msb(const Share& x) { return std::move(msb_many({&x, 1}).front()); }

std::optional<bool> Session::eq_test(const Share& x, const Share& y, Party receiver) {
  check_party(*this, x);
  check_party(*this, y);
  if (!x.values.same_shape(y.values)) {
    throw Error(ErrorCode::kShapeMismatch, "eq_test: operand shapes differ");
  }
  const auto diff = (x - y).values;
  const auto masks = triples_.odd_masks(diff.size());
  const auto triples = triples_.hadamard(diff.size());
  const auto result =
      proto::eq_test<Ring>(link_, diff.values(), masks, triples, receiver);
  return result.equal;
}

Share Session::blocked_mult_shift_avg(const Share& zc, const Share& x,
                                      std::size_t block) {
  check_party(*this, zc);
  check_party(*this, x);
  const std::size_t n = zc.cols();
  if (x.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch, "blocked product: inner dimensions differ");
  }
  const std::size_t b = std::min(block, n);
  if (!is_pow2(b) || n % b != 0 || !is_pow2(n / b)) {
    throw Error(ErrorCode::kBadBlockSize,
                "block size and block count must be powers of two dividing n");
  }
  const std::size_t blocks = n / b;
  const Share zt = transposed(zc);
  std::vector<std::pair<Share, Share>> pairs;
  for (std::size_t k = 0; k < blocks; ++k) {
    pairs.emplace_back(transposed(row_block(zt, k * b, b)), row_block(x, k * b, b));
  }
  const auto products = mul_many(pairs);
  std::vector<std::pair<Share, int>> shifts;
  for (const auto& p : products) shifts.emplace_back(p, frac_bits() + log2_exact(b));
  const auto averaged = trunc_many(shifts);
  Share sum = averaged.front();
  for (std::size_t k = 1; k < averaged.size(); ++k) sum = sum + averaged[k];
  if (blocks > 1) sum = trunc(sum, log2_exact(blocks));
  return sum;
}

Share Session::sigmoid_pw(const Share& v) {
  const Ring half = Ring{1} << (frac_bits() - 1);
  const Share upper = add_public(v, half);           // v + 1/2
  const Share lower = add_public(v, Ring{0} - half);  // v - 1/2
  const Share signs_in[] = {upper, lower};
  const auto signs = msb_many(signs_in);
  const Share b1 = add_public(-signs[0], Ring{1});
  const Share b2 = add_public(-signs[1], Ring{1});
  const std::pair<Share, Share> terms[] = {{b1, upper}, {b2, -lower}};
  const auto pieces = hadamard_many(terms);
  return pieces[0] + pieces[1];
}

PairRunStats run_two_party(TripleSource& modeler_triples,
                           TripleSource& regulator_triples,
                           const SessionOptions& options,
                           const std::function<void(Session&)>& modeler,
                           const std::function<void(Session&)>& regulator) {
  auto [t1, t2] = make_in_process_pair();
  std::exception_ptr errors[2];
  bool root_cause[2] = {false, false};
  PairRunStats stats;

  auto body = [&](int i, Party party, std::unique_ptr<Transport>& transport,
                  TripleSource& triples, const std::function<void(Session&)>& fn) {
    {
      Channel channel(*transport);
      try {
        Session session(party, channel, triples, options);
        fn(session);
        if (i == 0) {
          stats.steps = channel.step();
          stats.bytes_modeler = channel.bytes_sent();
          stats.transcript_modeler = channel.transcript_digest();
        } else {
          stats.bytes_regulator = channel.bytes_sent();
          stats.transcript_regulator = channel.transcript_digest();
        }
      } catch (const Error& e) {
        errors[i] = std::current_exception();
        root_cause[i] = e.code() != ErrorCode::kPeerAborted && e.code() != ErrorCode::kIo;
        channel.abort(e.code());
      } catch (...) {
        errors[i] = std::current_exception();
        root_cause[i] = true;
        channel.abort(ErrorCode::kInvalidArgument);
      }
    }
    transport.reset();
  };

  std::thread worker(body, 0, Party::kModeler, std::ref(t1), std::ref(modeler_triples),
                     std::cref(modeler));
  body(1, Party::kRegulator, t2, regulator_triples, regulator);
  worker.join();

  for (int i = 0; i < 2; ++i) {
    if (errors[i] && root_cause[i]) std::rethrow_exception(errors[i]);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return stats;
}

}  // namespace fairmpc
