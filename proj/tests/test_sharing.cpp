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


#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <thread>

#include "fairmpc/error.hpp"
#include "fairmpc/fpsh.hpp"
#include "fairmpc/share.hpp"
#include "fairmpc/triples.hpp"

namespace fairmpc {
namespace {


ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(Sharing, SplitExamples) {
  Prg rng(1);
  auto [a, b] = split(RingMatrix(1, 1, 42), rng);
  EXPECT_EQ(a.party, Party::kModeler);
  EXPECT_EQ(b.party, Party::kRegulator);
  EXPECT_EQ(a.values[0], 42 - b.values[0]);
  EXPECT_EQ(reconstruct(a, b)[0], 42u);

  const Share s1{Party::kModeler, RingMatrix(1, 1, 32)};
  const Share s2{Party::kRegulator, RingMatrix(1, 1, 10)};
  EXPECT_EQ(reconstruct(s1, s2)[0], 42u);
  const Share w1{Party::kModeler, RingMatrix(1, 1, ~Ring{0})};
  const Share w2{Party::kRegulator, RingMatrix(1, 1, 1)};
  EXPECT_EQ(reconstruct(w1, w2)[0], 0u);
  const Share zero{Party::kRegulator, RingMatrix(1, 1, 0)};
  EXPECT_EQ(reconstruct(Share{Party::kModeler, RingMatrix(1, 1, 77)}, zero)[0], 77u);
}

TEST(Sharing, ReconstructErrors) {
  const Share a{Party::kModeler, RingMatrix(2, 1)};
  const Share b{Party::kRegulator, RingMatrix(1, 2)};
  EXPECT_EQ(code_of([&] { reconstruct(a, b); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { reconstruct(a, a); }), ErrorCode::kSameParty);
}

TEST(Sharing, SplitReconstructProperty) {
  Prg rng(2);
  RingMatrix secret(1000, 100);
  for (auto& v : secret.values()) v = rng.next_u64();
  auto [a, b] = split(secret, rng);
  EXPECT_EQ(reconstruct(a, b), secret);
  EXPECT_EQ(reconstruct(b, a), secret);
}

TEST(Sharing, LocalArithmetic) {
  Prg rng(3);
  const RingMatrix x(2, 2, {1, 2, 3, 4}), y(2, 2, {10, 20, 30, 40});
  auto [x1, x2] = split(x, rng);
  auto [y1, y2] = split(y, rng);
  EXPECT_EQ(reconstruct(x1 + y1, x2 + y2), x + y);
  EXPECT_EQ(reconstruct(x1 - y1, x2 - y2), x - y);
  EXPECT_EQ(reconstruct(add_public(x1, 5), add_public(x2, 5)), RingMatrix(2, 2, {6, 7, 8, 9}));
  EXPECT_EQ(reconstruct(scale_public(x1, 3), scale_public(x2, 3)), scale(x, 3));
  EXPECT_EQ(reconstruct(transposed(x1), transposed(x2)), x.transposed());
  const Share t1 = trivial_share(Party::kModeler, Party::kRegulator, x);
  const Share t2 = trivial_share(Party::kRegulator, Party::kRegulator, x);
  EXPECT_EQ(reconstruct(t1, t2), x);
}

// Per-bit frequency of each party's share within 3 sigma of 1/2.
// Checks all 64 bit positions at once, so the per-bit bound is 5 sigma to keep
// the chance of a false alarm across positions negligible.
void expect_uniform_bits(const std::vector<Ring>& samples) {
  const double n = static_cast<double>(samples.size());
  const double sigma = std::sqrt(n * 0.25);
  for (int bit = 0; bit < 64; ++bit) {
    double ones = 0;
    for (Ring v : samples) ones += static_cast<double>((v >> bit) & 1);
    EXPECT_LE(std::abs(ones - n / 2), 5 * sigma) << "bit " << bit;
  }
}

TEST(Sharing, SharesAreUniform) {
  Prg rng(4);
  std::vector<Ring> first, second;
  for (int i = 0; i < 100000; ++i) {
    auto [a, b] = split(RingMatrix(1, 1, 7), rng);
    first.push_back(a.values[0]);
    second.push_back(b.values[0]);
  }
  expect_uniform_bits(first);
  expect_uniform_bits(second);
}

TEST(Dealer, ScalarTriplesAreCorrect) {
  Prg rng(5);
  DealSpec spec;
  spec.matrix[{1, 1, 1}] = 10000;
  spec.hadamard = 10000;
  auto [p1, p2] = deal(spec, rng);
  for (int i = 0; i < 10000; ++i) {
    const MatrixTriple t1 = p1.matrix(1, 1, 1), t2 = p2.matrix(1, 1, 1);
    EXPECT_EQ((t1.a[0] + t2.a[0]) * (t1.b[0] + t2.b[0]), t1.c[0] + t2.c[0]);
  }
  const auto h1 = p1.hadamard(10000), h2 = p2.hadamard(10000);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_EQ((h1[i].a + h2[i].a) * (h1[i].b + h2[i].b), h1[i].c + h2[i].c);
  }
}

TEST(Dealer, MatrixTriplesAreCorrect) {
  Prg rng(6);
  auto [t1, t2] = deal_matrix(3, 4, 5, rng);
  EXPECT_EQ(matmul(t1.a + t2.a, t1.b + t2.b), t1.c + t2.c);
}

TEST(Dealer, ConversionTuplesRecompose) {
  Prg rng(7);
  DealSpec spec;
  spec.comparisons = 10000;
  spec.odd_masks = 10000;
  auto [p1, p2] = deal(spec, rng);
  auto [c1, a1] = p1.comparison(10000);
  auto [c2, a2] = p2.comparison(10000);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_EQ(c1[i].rho + c2[i].rho, c1[i].rho_bits ^ c2[i].rho_bits);
    EXPECT_EQ(c1[i].dabit + c2[i].dabit, Ring{static_cast<Ring>(c1[i].dabit_xor ^ c2[i].dabit_xor)});
    EXPECT_EQ((a1[i].a ^ a2[i].a) & (a1[i].b ^ a2[i].b), a1[i].c ^ a2[i].c);
  }
  const auto o1 = p1.odd_masks(10000), o2 = p2.odd_masks(10000);
  for (int i = 0; i < 10000; ++i) EXPECT_EQ((o1[i] + o2[i]) & 1, 1u);
}

TEST(Dealer, DealtSharesAreUniform) {
  Prg rng(8);
  DealSpec spec;
  spec.hadamard = 100000;
  auto [p1, p2] = deal(spec, rng);
  std::vector<Ring> a1, c2;
  for (const auto& t : p1.hadamard_pool) a1.push_back(t.a);
  for (const auto& t : p2.hadamard_pool) c2.push_back(t.c);
  expect_uniform_bits(a1);
  expect_uniform_bits(c2);
}

TEST(Dealer, EmptySpec) {
  Prg rng(9);
  auto [p1, p2] = deal(DealSpec{}, rng);
  EXPECT_EQ(p1.remaining(), DealSpec{});
  EXPECT_TRUE(p2.hadamard(0).empty());
  EXPECT_EQ(code_of([&] { p1.hadamard(1); }), ErrorCode::kTripleExhausted);
}

TEST(Dealer, ExhaustionIsAnError) {
  Prg rng(10);
  DealSpec spec;
  spec.matrix[{2, 2, 1}] = 1;
  spec.comparisons = 3;
  auto [p1, p2] = deal(spec, rng);
  p1.matrix(2, 2, 1);
  EXPECT_EQ(code_of([&] { p1.matrix(2, 2, 1); }), ErrorCode::kTripleExhausted);
  EXPECT_EQ(code_of([&] { p1.matrix(1, 2, 1); }), ErrorCode::kTripleExhausted);
  p1.comparison(2);
  EXPECT_EQ(code_of([&] { p1.comparison(2); }), ErrorCode::kTripleExhausted);
  DealSpec used;
  used.matrix[{2, 2, 1}] = 1;
  used.comparisons = 2;
  EXPECT_EQ(p1.consumed(), used);
}

TEST(Dealer, ReproducibleFromSeed) {
  DealSpec spec;
  spec.matrix[{4, 3, 2}] = 5;
  spec.hadamard = 100;
  spec.comparisons = 100;
  spec.odd_masks = 10;
  Prg r1(11), r2(11);
  auto [a1, a2] = deal(spec, r1);
  auto [b1, b2] = deal(spec, r2);
  EXPECT_EQ(encode_container({Party::kModeler, ObjectType::kShareMatrix, {},
                              a1.matrix_pool.begin()->second[3].c}),
            encode_container({Party::kModeler, ObjectType::kShareMatrix, {},
                              b1.matrix_pool.begin()->second[3].c}));
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(a2.conversion_pool[i].rho, b2.conversion_pool[i].rho);
    EXPECT_EQ(a1.and_pool[i].c, b1.and_pool[i].c);
  }
}

TEST(Dealer, DealSpecArithmetic) {
  DealSpec a;
  a.matrix[{1, 2, 3}] = 2;
  a.hadamard = 3;
  DealSpec b = a * 3;
  EXPECT_EQ(b.matrix[(MatShape{1, 2, 3})], 6u);
  EXPECT_EQ(b.hadamard, 9u);
  EXPECT_EQ((a + a).hadamard, 6u);
}

TEST(StreamingDealer, MatchesAlgebraAcrossThreads) {
  StreamingDealer dealer(12);
  MatrixTriple m[2];
  std::vector<HadamardTriple> h[2];
  std::vector<ConversionTuple> c[2];
  auto run = [&](int i, Party p) {
    auto& src = dealer.endpoint(p);
    m[i] = src.matrix(2, 3, 4);
    h[i] = src.hadamard(50);
    c[i] = src.comparison(20).first;
  };
  std::thread t(run, 0, Party::kModeler);
  run(1, Party::kRegulator);
  t.join();
  EXPECT_EQ(matmul(m[0].a + m[1].a, m[0].b + m[1].b), m[0].c + m[1].c);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ((h[0][i].a + h[1][i].a) * (h[0][i].b + h[1][i].b), h[0][i].c + h[1][i].c);
  }
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(c[0][i].rho + c[1][i].rho, c[0][i].rho_bits ^ c[1][i].rho_bits);
  }
}

TEST(StreamingDealer, DivergentRequestsAreDesync) {
  StreamingDealer dealer(13);
  dealer.endpoint(Party::kModeler).hadamard(5);
  EXPECT_EQ(code_of([&] { dealer.endpoint(Party::kRegulator).hadamard(6); }),
            ErrorCode::kPeerDesync);
}

class FpshTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("fpsh_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(FpshTest, HeaderLayout) {
  const Container c{Party::kRegulator, ObjectType::kShareMatrix, {}, RingMatrix(1, 2, {1, 0x0102})};
  const auto bytes = encode_container(c);
  ASSERT_EQ(bytes.size(), 15u + 16u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "FPSH");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 2);
  EXPECT_EQ(bytes[6], 1);
  EXPECT_EQ(bytes[7], 1);   // rows, little-endian
  EXPECT_EQ(bytes[11], 2);  // cols
  EXPECT_EQ(bytes[15], 1);
  EXPECT_EQ(bytes[23], 2);
  EXPECT_EQ(bytes[24], 1);
  const Container back = decode_container(bytes);
  EXPECT_EQ(back.body, c.body);
  EXPECT_EQ(back.party, Party::kRegulator);
}

TEST_F(FpshTest, RejectsCorruptFiles) {
  auto bytes = encode_container({Party::kModeler, ObjectType::kShareMatrix, {}, RingMatrix(2, 2)});
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_container(bad); }), ErrorCode::kBadFormat);
  bad = bytes;
  bad[5] = 3;
  EXPECT_EQ(code_of([&] { decode_container(bad); }), ErrorCode::kBadFormat);
  bad = bytes;
  bad.pop_back();
  EXPECT_EQ(code_of([&] { decode_container(bad); }), ErrorCode::kBadFormat);
  bad = bytes;
  bad[6] = 99;
  EXPECT_EQ(code_of([&] { decode_container(bad); }), ErrorCode::kBadFormat);
}

TEST_F(FpshTest, ShareAndPoolRoundTrip) {
  Prg rng(14);
  RingMatrix secret(5, 3);
  for (auto& v : secret.values()) v = rng.next_u64();
  auto [a, b] = split(secret, rng);
  save_share(dir_ / "a.fpsh", a);
  save_share(dir_ / "b.fpsh", b);
  EXPECT_EQ(reconstruct(load_share(dir_ / "a.fpsh"), load_share(dir_ / "b.fpsh")), secret);

  DealSpec spec;
  spec.matrix[{2, 3, 1}] = 4;
  spec.matrix[{1, 3, 1}] = 2;
  spec.hadamard = 17;
  spec.comparisons = 9;
  spec.odd_masks = 3;
  auto [p1, p2] = deal(spec, rng);
  save_triple_set(dir_ / "m", p1);
  save_triple_set(dir_ / "r", p2);
  TripleSet l1 = load_triple_set(dir_ / "m", Party::kModeler);
  TripleSet l2 = load_triple_set(dir_ / "r", Party::kRegulator);
  EXPECT_EQ(l1.remaining(), spec);
  EXPECT_EQ(l2.remaining(), spec);
  for (int i = 0; i < 4; ++i) {
    const auto t1 = l1.matrix(2, 3, 1), t2 = l2.matrix(2, 3, 1);
    EXPECT_EQ(matmul(t1.a + t2.a, t1.b + t2.b), t1.c + t2.c);
  }
  const auto [c1, n1] = l1.comparison(9);
  EXPECT_EQ(c1.back().rho_bits, p1.conversion_pool.back().rho_bits);
  EXPECT_EQ(n1.back().c, p1.and_pool.back().c);
  EXPECT_EQ(l2.odd_masks(3), p2.odd_pool);
}

}  // namespace
}  // namespace fairmpc
