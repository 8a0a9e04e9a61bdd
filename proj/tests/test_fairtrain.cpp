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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "fairmpc/dataset.hpp"
#include "fairmpc/fairtrain.hpp"
#include "fairmpc/pipeline.hpp"
#include "fairmpc/reference.hpp"
#include "support.hpp"

namespace fairmpc {
namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_log2 = 4;
  cfg.block = 64;
  cfg.eta_theta = 0.05;
  cfg.eta_lambda = 0.5;
  cfg.seed = 3;
  return cfg;
}

TEST(Schedule, StepConstants) {
  TrainConfig cfg;
  EXPECT_DOUBLE_EQ(xi_bce(10, 1), 10.0 / 11.0);
  EXPECT_DOUBLE_EQ(xi_con(10, 1), 2.0);
  EXPECT_DOUBLE_EQ(xi_con(10, 10), 11.0);
  const auto first = step_constants(cfg, 1);
  EXPECT_EQ(first.k_bce, 390452u);
  EXPECT_EQ(first.k_con, 858993u);
  const auto last = step_constants(cfg, 10);
  EXPECT_EQ(last.k_bce, 214748u);
  EXPECT_EQ(last.k_con, 4724464u);
  EXPECT_EQ(lambda_rate(cfg, 16), 3277u);
}

TEST(Schedule, MinibatchOrderIsSeededPermutation) {
  const auto a = minibatch_order(1024, 7);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(1024);
  std::iota(iota.begin(), iota.end(), std::size_t{0});
  EXPECT_EQ(sorted, iota);
  EXPECT_EQ(a, minibatch_order(1024, 7));
  EXPECT_NE(a, minibatch_order(1024, 8));
}

TEST(Schedule, ConfigValidation) {
  TrainConfig cfg = small_config();
  EXPECT_NO_THROW(validate_config(cfg, 256));
  EXPECT_THROW(validate_config(cfg, 255), Error);
  cfg.block = 48;
  try {
    validate_config(cfg, 256);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadBlockSize);
  }
  cfg = small_config();
  cfg.epochs = 0;
  EXPECT_THROW(validate_config(cfg, 256), Error);
  const double negative[] = {-0.1};
  EXPECT_THROW(encode_slack(negative, 16), Error);
}

TEST(Schedule, ExchangeCountsAreFrozen) {
  const TrainConfig cfg = small_config();
  // 2 setup + 198 per minibatch + 1 model transfer.
  EXPECT_EQ(training_exchanges(256, cfg, TruncationMode::kProbabilistic), 2u + 198u * 32u + 1u);
  // The hook adds the mean, block and block-sum shifts plus 3 per minibatch.
  EXPECT_EQ(training_exchanges(256, cfg, TruncationMode::kDeterministic), 5u + 201u * 32u + 1u);
}

class TrainFixture : public ::testing::Test {
 protected:
  void SetUp() override { data_ = synth(256, 0.3, 11); }
  Dataset data_;
};

TEST_F(TrainFixture, ConstraintMatchesFloat) {
  const Split& s = data_.train;
  const TrainConfig cfg = small_config();
  const auto want = constraint_matrix(s);
  const RingMatrix fixed = constraint_matrix_fixed(s, cfg);
  Prg rng(5);
  auto [z1, z2] = share_sensitive(s, rng);
  const RingMatrix x = encode_features(s);
  DealSpec spec;
  spec.matrix[{s.p, 64, s.d}] = s.n / 64;
  RingMatrix got;
  SessionOptions options;
  options.truncation = TruncationMode::kDeterministic;
  testing::run_symmetric(
      spec, 6,
      [&](Session& sess) {
        const Share xs = trivial_share(sess.party(), Party::kModeler, x);
        const Share zc = center_sensitive(sess, sess.is_modeler() ? z1 : z2);
        const auto r = sess.open(build_constraint(sess, zc, xs, cfg));
        if (sess.is_modeler()) got = r;
      },
      options);
  EXPECT_EQ(got, fixed);
  for (std::size_t j = 0; j < want.size(); ++j) {
    EXPECT_NEAR(decode_raw(got[j]), want[j], 1e-3) << j;
  }
}

TEST_F(TrainFixture, PoolsAreConsumedExactlyAndLambdaStaysNonnegative) {
  const Split& s = data_.train;
  const TrainConfig cfg = small_config();
  const double slack[] = {0.01};
  const DealSpec spec = training_consumption(s.n, s.d, s.p, cfg);
  Prg rng(7);
  auto [z1, z2] = share_sensitive(s, rng);
  const RingMatrix x = encode_features(s), y = encode_labels(s);
  auto [p1, p2] = deal(spec, rng);

  std::mutex mutex;
  std::vector<RingMatrix> lambdas[2];
  auto body = [&](Session& sess) {
    const int side = sess.is_modeler() ? 0 : 1;
    const SharedData shared{trivial_share(sess.party(), Party::kModeler, x),
                            trivial_share(sess.party(), Party::kModeler, y),
                            side == 0 ? z1 : z2};
    train(sess, shared, slack, cfg, [&](std::size_t, const Share&, const Share& lambda) {
      std::lock_guard lock(mutex);
      lambdas[side].push_back(lambda.values);
    });
  };
  const auto stats = run_two_party(p1, p2, {}, body, body);
  EXPECT_EQ(stats.steps, training_exchanges(s.n, cfg, TruncationMode::kProbabilistic));
  EXPECT_EQ(p1.remaining(), DealSpec{});
  EXPECT_EQ(p2.remaining(), DealSpec{});
  EXPECT_EQ(p1.consumed(), spec);

  ASSERT_EQ(lambdas[0].size(), 32u);
  bool active = false;
  for (std::size_t t = 0; t < lambdas[0].size(); ++t) {
    const RingMatrix l = lambdas[0][t] + lambdas[1][t];
    for (Ring v : l.data()) {
      EXPECT_GE(as_signed(v), 0) << "update " << t;
      active = active || v != 0;
    }
  }
  EXPECT_TRUE(active) << "slack this tight should activate the constraint";
}

TEST_F(TrainFixture, HookRunIsBitwiseEqualToFixedReference) {
  const Split& s = data_.train;
  const TrainConfig cfg = small_config();
  const double slack[] = {0.01};
  std::vector<std::vector<Ring>> want;
  const auto final_theta = train_lagrangian_fixed(
      s, slack, cfg, 16, [&](std::size_t, std::span<const Ring> theta, std::span<const Ring>) {
        want.emplace_back(theta.begin(), theta.end());
      });
  SessionOptions options;
  options.truncation = TruncationMode::kDeterministic;
  const auto got = train_local(s, slack, cfg, options, 21, 22, true);
  EXPECT_EQ(got.stats.steps, training_exchanges(s.n, cfg, TruncationMode::kDeterministic));
  ASSERT_EQ(got.trajectory.size(), want.size());
  for (std::size_t t = 0; t < want.size(); ++t) ASSERT_EQ(got.trajectory[t], want[t]) << t;
  EXPECT_EQ(got.theta_raw, final_theta);
}

TEST_F(TrainFixture, ProbabilisticRunStaysCloseToFixedReference) {
  const Split& s = data_.train;
  const TrainConfig cfg = small_config();
  const double slack[] = {0.01};
  const auto want = train_lagrangian(s, slack, cfg, Arithmetic::kFixed);
  const auto got = train_local(s, slack, cfg, {}, 31, 32);
  ASSERT_EQ(got.theta.size(), want.size());
  for (std::size_t j = 0; j < want.size(); ++j) EXPECT_NEAR(got.theta[j], want[j], 1e-2) << j;
}

TEST_F(TrainFixture, InactiveConstraintLeavesLambdaAtZero) {
  const Split& s = data_.train;
  const TrainConfig cfg = small_config();
  const double loose[] = {1000.0};
  const auto constrained = train_lagrangian_float(s, loose, cfg);
  const auto plain = train_unconstrained(s, cfg);
  EXPECT_EQ(constrained, plain);

  std::vector<Ring> max_lambda(1, 0);
  train_lagrangian_fixed(s, loose, cfg, 16,
                         [&](std::size_t, std::span<const Ring>, std::span<const Ring> l) {
                           max_lambda[0] = std::max(max_lambda[0], l[0]);
                         });
  EXPECT_EQ(max_lambda[0], 0u);
}

TEST_F(TrainFixture, MismatchedConfigsDesync) {
  const Split& s = data_.train;
  TrainConfig a = small_config(), b = small_config();
  b.seed = 99;
  const double slack[] = {0.1};
  Prg rng(8);
  auto [z1, z2] = share_sensitive(s, rng);
  const RingMatrix x = encode_features(s), y = encode_labels(s);
  auto [p1, p2] = deal(training_consumption(s.n, s.d, s.p, a), rng);
  try {
    run_two_party(
        p1, p2, {},
        [&](Session& sess) {
          train(sess, {trivial_share(sess.party(), Party::kModeler, x),
                       trivial_share(sess.party(), Party::kModeler, y), z1},
                slack, a);
        },
        [&](Session& sess) {
          train(sess, {trivial_share(sess.party(), Party::kModeler, x),
                       trivial_share(sess.party(), Party::kModeler, y), z2},
                slack, b);
        });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPeerDesync);
  }
}

}  // namespace
}  // namespace fairmpc
