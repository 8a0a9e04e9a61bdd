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

// Fairness-constrained logistic regression trained on shared data.
//
// The constraint is F(theta) = |A theta| - c <= 0 with A = (1/n) Zc^T X, the
// covariance between the centered sensitive attributes and the features.
// Training alternates an SGD step on theta with a projected ascent step on
// the multipliers lambda >= 0:
//
//   u      = A theta                      (one comparison per row gives sign)
//   sigma  = sigmoid_pw(X_i theta)
//   F      = |u| - c,   act = [F > 0]
//   g_bce  = X_i^T (sigma - y_i) / 2^s
//   g_con  = A^T (sign(u) * act * lambda)
//   theta -= eta_theta * (xi_bce(j) * g_bce + xi_con(j) * g_con)
//   lambda = max(lambda + eta_lambda * act * F, 0)
//
// The public step sizes eta_theta * xi(j) are applied as integers with
// kStepFracBits fractional bits so that eta_theta = 1e-4 is not crushed to a
// handful of Q16.16 units. The exact order of products and truncations is
// shared with the plaintext fixed-point mirror in reference.hpp.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fairmpc/mpc.hpp"

namespace fairmpc {

struct TrainConfig {
  double eta_theta = 1e-4;
  double eta_lambda = 0.05;
  int epochs = 10;
  int batch_log2 = 6;
  std::size_t block = 256;
  std::uint64_t seed = 1;

  std::size_t batch() const { return std::size_t{1} << batch_log2; }
};

inline constexpr int kStepFracBits = 32;

// Loss and constraint weights for epoch j (1-based).
double xi_bce(int epochs, int j);
double xi_con(int epochs, int j);

struct StepConstants {
  Ring k_bce = 0;  // round(eta_theta * xi_bce * 2^kStepFracBits)
  Ring k_con = 0;  // round(eta_theta * xi_con * 2^kStepFracBits)
};
StepConstants step_constants(const TrainConfig& cfg, int epoch);
// eta_lambda in the session's fixed-point format.
Ring lambda_rate(const TrainConfig& cfg, int frac_bits);

// Throws kBadShape / kBadBlockSize / kInvalidArgument when the run cannot
// be executed with n training rows.
void validate_config(const TrainConfig& cfg, std::size_t n);

// Row order of all minibatches: one seeded shuffle, then sequential passes.
std::vector<std::size_t> minibatch_order(std::size_t n, std::uint64_t seed);

// Slack vector in fixed point; throws kInvalidArgument on negative entries.
RingMatrix encode_slack(std::span<const double> slack, int frac_bits);

// This party's shares of the training data, all fixed-point encoded:
// X (n x d), y (n x 1), Z (n x p).
struct SharedData {
  Share x;
  Share y;
  Share z;
};

// Z minus its column means, the mean computed by a shift of log2(n).
Share center_sensitive(Session& s, const Share& z);
// A = (1/n) Zc^T X, p x d, via blocked_mult_shift_avg.
Share build_constraint(Session& s, const Share& zc, const Share& x,
                       const TrainConfig& cfg);

// Called after every minibatch update with the new shares.
using TrainObserver =
    std::function<void(std::size_t update, const Share& theta, const Share& lambda)>;

struct TrainResult {
  Share theta;                      // this party's final share
  std::optional<RingMatrix> model;  // reconstructed theta, modeler only
  std::size_t updates = 0;
};

// Runs the whole protocol, including the final transfer of the regulator's
// theta share to the modeler. Throws kOverflow on the modeler if the
// reconstructed model leaves the fixed-point range.
TrainResult train(Session& s, const SharedData& data, std::span<const double> slack,
                  const TrainConfig& cfg, const TrainObserver& observer = {});

// Correlated randomness consumed by train() for an n x d problem with p
// sensitive attributes.
DealSpec training_consumption(std::size_t n, std::size_t d, std::size_t p,
                              const TrainConfig& cfg);
// Exchanges performed by train(); closed form.
std::uint64_t training_exchanges(std::size_t n, const TrainConfig& cfg,
                                 TruncationMode mode);

}  // namespace fairmpc
