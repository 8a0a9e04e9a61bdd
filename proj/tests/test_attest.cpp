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

#include <unistd.h>

#include <cmath>
#include <filesystem>

#include "fairmpc/attest.hpp"
#include "fairmpc/dataset.hpp"
#include "fairmpc/pipeline.hpp"
#include "fairmpc/reference.hpp"
#include "support.hpp"

namespace fairmpc {
namespace {

TrainConfig cert_config() {
  TrainConfig cfg;
  cfg.block = 64;
  return cfg;
}

class AttestFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    data_ = synth(256, 0.8, 4);
    a_ = constraint_matrix(data_.train);
    theta_ = {0.8, -0.3, 0.1};
  }

  std::vector<Ring> raw(const std::vector<double>& v) const {
    std::vector<Ring> out;
    for (double x : v) out.push_back(encode_raw(x));
    return out;
  }

  double constraint(const std::vector<double>& theta) const {
    double u = 0;
    for (std::size_t j = 0; j < theta.size(); ++j) u += a_[j] * theta[j];
    return std::abs(u);
  }

  Dataset data_;
  std::vector<double> a_;
  std::vector<double> theta_;
};

TEST_F(AttestFixture, VerdictMatchesPlaintextConstraint) {
  const double u = constraint(theta_);
  ASSERT_GT(u, 0.01);
  for (double factor : {0.0, 0.5, 0.9, 1.1, 2.0, 100.0}) {
    const double slack[] = {u * factor};
    const auto r = certify_local(raw(theta_), data_.train, slack, cert_config(), {}, 9);
    EXPECT_EQ(r.fair, factor > 1) << factor;
    EXPECT_EQ(r.violations, factor > 1 ? 0u : 1u) << factor;
    ASSERT_TRUE(r.modeler_half.has_value());
    EXPECT_EQ(r.regulator_half.has_value(), r.fair);
  }
}

TEST_F(AttestFixture, ZeroModelIsFairEvenAtZeroSlack) {
  const double slack[] = {0.0};
  const auto r = certify_local(raw({0, 0, 0}), data_.train, slack, cert_config(), {}, 10);
  EXPECT_TRUE(r.fair);
}

TEST_F(AttestFixture, CommitmentIsAFreshSharingOfTheModel) {
  const double slack[] = {10.0};
  const auto theta = raw(theta_);
  const auto a = certify_local(theta, data_.train, slack, cert_config(), {}, 11, 77);
  const auto b = certify_local(theta, data_.train, slack, cert_config(), {}, 12, 77);
  ASSERT_TRUE(a.regulator_half && b.regulator_half);
  EXPECT_EQ(reconstruct(a.modeler_half->theta, a.regulator_half->theta).data(), theta);
  EXPECT_NE(a.regulator_half->theta.values, b.regulator_half->theta.values);
  EXPECT_EQ(a.regulator_half->session_id, 77u);
  EXPECT_EQ(a.regulator_half->theta.party, Party::kRegulator);
}

TEST_F(AttestFixture, PoolsMatchDeclaredConsumption) {
  const Split& s = data_.train;
  const TrainConfig cfg = cert_config();
  const DealSpec spec = certify_consumption(s.n, s.d, s.p, cfg);
  Prg rng(13);
  auto [z1, z2] = share_sensitive(s, rng);
  auto [p1, p2] = deal(spec, rng);
  const RingMatrix x = encode_features(s);
  const RingMatrix theta(s.d, 1, raw(theta_));
  const double slack[] = {1.0};
  run_two_party(
      p1, p2, {},
      [&](Session& sess) {
        Prg local(1);
        certify(sess, &theta, s.d, trivial_share(sess.party(), Party::kRegulator, RingMatrix(s.n, s.d)),
                z1, slack, cfg, 1, local);
      },
      [&](Session& sess) {
        Prg local(2);
        certify(sess, nullptr, s.d, trivial_share(sess.party(), Party::kRegulator, x), z2, slack,
                cfg, 1, local);
      });
  EXPECT_EQ(p1.remaining(), DealSpec{});
  EXPECT_EQ(p2.remaining(), DealSpec{});
}

TEST_F(AttestFixture, VerifyAcceptsCommittedModelOnly) {
  const double slack[] = {10.0};
  const auto theta = raw(theta_);
  const auto cert = certify_local(theta, data_.train, slack, cert_config(), {}, 14);
  ASSERT_TRUE(cert.regulator_half);
  const Split& t = data_.test;
  int checked = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const std::span<const double> row(t.x.data() + i * t.d, t.d);
    double score = 0;
    for (std::size_t j = 0; j < t.d; ++j) score += row[j] * theta_[j];
    if (std::abs(score) < 1e-3) continue;
    const int decision = score >= 0 ? 1 : 0;
    const auto ok = verify_local(theta, *cert.modeler_half, *cert.regulator_half, row, decision, {}, 20 + i);
    EXPECT_EQ(ok.model_match, std::optional<bool>(true));
    EXPECT_EQ(ok.decision_match, std::optional<bool>(true));
    const auto lie = verify_local(theta, *cert.modeler_half, *cert.regulator_half, row, 1 - decision, {}, 40 + i);
    EXPECT_EQ(lie.decision_match, std::optional<bool>(false));
    ++checked;
  }
  EXPECT_GE(checked, 6);

  for (std::size_t j = 0; j < theta.size(); ++j) {
    auto swapped = theta;
    swapped[j] += 1;  // one ulp
    const std::span<const double> row(t.x.data(), t.d);
    const auto r = verify_local(swapped, *cert.modeler_half, *cert.regulator_half, row, 1, {}, 60 + j);
    EXPECT_EQ(r.model_match, std::optional<bool>(false));
    EXPECT_FALSE(r.decision_match.has_value());
  }
}

TEST_F(AttestFixture, CommitmentFileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / ("fairmpc_attest_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const double slack[] = {10.0};
  const auto cert = certify_local(raw(theta_), data_.train, slack, cert_config(), {}, 15, 5);
  save_commitment(dir / "reg.fpsh", *cert.regulator_half);
  const Commitment back = load_commitment(dir / "reg.fpsh");
  EXPECT_EQ(back.session_id, 5u);
  EXPECT_EQ(back.created_unix, cert.regulator_half->created_unix);
  EXPECT_EQ(back.theta.values, cert.regulator_half->theta.values);
  EXPECT_EQ(back.theta.party, Party::kRegulator);
  try {
    load_commitment(dir / "missing.fpsh");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCommitment);
  }
  std::filesystem::remove_all(dir);
}

TEST_F(AttestFixture, WrongHalfIsRejected) {
  const double slack[] = {10.0};
  const auto cert = certify_local(raw(theta_), data_.train, slack, cert_config(), {}, 16);
  const std::span<const double> row(data_.test.x.data(), data_.test.d);
  try {
    verify_local(raw(theta_), *cert.regulator_half, *cert.modeler_half, row, 1, {}, 17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSameParty);
  }
}

TEST(AttestConsumption, Declared) {
  TrainConfig cfg;
  cfg.block = 64;
  const DealSpec c = certify_consumption(256, 3, 1, cfg);
  EXPECT_EQ(c.matrix.at({1, 64, 3}), 4u);
  EXPECT_EQ(c.matrix.at({1, 3, 1}), 1u);
  EXPECT_EQ(c.hadamard, 1u);
  EXPECT_EQ(c.comparisons, 2u);
  const DealSpec v = verify_consumption(3);
  EXPECT_EQ(v.odd_masks, 3u);
  EXPECT_EQ(v.hadamard, 3u);
  EXPECT_EQ(v.comparisons, 1u);
}

}  // namespace
}  // namespace fairmpc
