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

#include "fairmpc/fairtrain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace fairmpc {

namespace {

Share gather(const Share& x, std::span<const std::size_t> rows) {
  return {x.party, x.values.gather_rows(rows)};
}

Share ones_minus(const Share& bits) { return add_public(-bits, Ring{1}); }

}  // namespace

double xi_bce(int epochs, int j) {
  return static_cast<double>(epochs) / static_cast<double>(epochs + j);
}

double xi_con(int epochs, int j) {
  return static_cast<double>(epochs + 10 * j) / static_cast<double>(epochs);
}

StepConstants step_constants(const TrainConfig& cfg, int epoch) {
  const double scale = std::ldexp(1.0, kStepFracBits);
  return {static_cast<Ring>(std::llround(cfg.eta_theta * xi_bce(cfg.epochs, epoch) * scale)),
          static_cast<Ring>(std::llround(cfg.eta_theta * xi_con(cfg.epochs, epoch) * scale))};
}

Ring lambda_rate(const TrainConfig& cfg, int frac_bits) {
  return encode_raw(cfg.eta_lambda, frac_bits);
}

void validate_config(const TrainConfig& cfg, std::size_t n) {
  if (cfg.epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be positive");
  if (cfg.batch_log2 < 0 || cfg.batch_log2 > 20) {
    throw Error(ErrorCode::kInvalidArgument, "batch_log2 out of range");
  }
  if (!(cfg.eta_theta > 0) || !(cfg.eta_lambda > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rates must be positive");
  }
  if (!is_pow2(n) || n < 2) throw Error(ErrorCode::kBadShape, "n must be a power of two >= 2");
  if (n % cfg.batch() != 0) throw Error(ErrorCode::kBadShape, "n not divisible by the batch");
  const std::size_t b = std::min(cfg.block, n);
  if (!is_pow2(b) || n % b != 0 || !is_pow2(n / b)) {
    throw Error(ErrorCode::kBadBlockSize, "block size must be a power of two dividing n");
  }
}

std::vector<std::size_t> minibatch_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

RingMatrix encode_slack(std::span<const double> slack, int frac_bits) {
  RingMatrix c(slack.size(), 1);
  for (std::size_t j = 0; j < slack.size(); ++j) {
    if (!(slack[j] >= 0)) throw Error(ErrorCode::kInvalidArgument, "slack must be nonnegative");
    c[j] = encode_raw(slack[j], frac_bits);
  }
  return c;
}

Share center_sensitive(Session& s, const Share& z) {
  const std::size_t n = z.rows(), p = z.cols();
  if (!is_pow2(n) || n < 2) throw Error(ErrorCode::kBadShape, "n must be a power of two >= 2");
  RingMatrix sums(1, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) sums(0, j) += z.values(i, j);
  }
  const Share mean = s.trunc({s.party(), sums}, log2_exact(n));
  Share zc = z;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) zc.values(i, j) -= mean.values(0, j);
  }
  return zc;
}

Share build_constraint(Session& s, const Share& zc, const Share& x,
                       const TrainConfig& cfg) {
  return s.blocked_mult_shift_avg(transposed(zc), x, cfg.block);
}

TrainResult train(Session& s, const SharedData& data, std::span<const double> slack,
                  const TrainConfig& cfg, const TrainObserver& observer) {
  const std::size_t n = data.x.rows(), d = data.x.cols(), p = data.z.cols();
  if (data.y.rows() != n || data.y.cols() != 1 || data.z.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch, "X, y and Z row counts differ");
  }
  if (slack.size() != p) throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  validate_config(cfg, n);
  const int f = s.frac_bits();
  const RingMatrix c = encode_slack(slack, f);

  std::vector<Ring> config = {n, d, p, static_cast<Ring>(cfg.epochs),
                              static_cast<Ring>(cfg.batch_log2), cfg.block, cfg.seed,
                              std::bit_cast<Ring>(cfg.eta_theta),
                              std::bit_cast<Ring>(cfg.eta_lambda), static_cast<Ring>(f),
                              static_cast<Ring>(s.options().truncation)};
  config.insert(config.end(), c.data().begin(), c.data().end());
  s.link().sync(config);

  const Share zc = center_sensitive(s, data.z);
  const Share a = build_constraint(s, zc, data.x, cfg);
  const Share at = transposed(a);
  const Ring half = Ring{1} << (f - 1);
  const Ring k_lambda = lambda_rate(cfg, f);
  const std::size_t batch = cfg.batch();
  const std::size_t per_epoch = n / batch;
  const auto order = minibatch_order(n, cfg.seed);

  Share theta{s.party(), RingMatrix(d, 1)};
  Share lambda{s.party(), RingMatrix(p, 1)};
  std::size_t update = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const StepConstants k = step_constants(cfg, epoch);
    for (std::size_t mb = 0; mb < per_epoch; ++mb) {
      const std::span<const std::size_t> rows(order.data() + mb * batch, batch);
      const Share xi = gather(data.x, rows);
      const Share yi = gather(data.y, rows);

      // u = A theta, v = X_i theta.
      const std::pair<Share, Share> fwd[] = {{a, theta}, {xi, theta}};
      const auto prod = s.mul_many(fwd);
      const std::pair<Share, int> fwd_shift[] = {{prod[0], f}, {prod[1], f}};
      const auto uv = s.trunc_many(fwd_shift);
      const Share& u = uv[0];
      const Share& v = uv[1];

      // Signs of u and of v -/+ 1/2 in one comparison batch.
      const Share upper = add_public(v, half);
      const Share lower = add_public(v, Ring{0} - half);
      const Share cmp_in[] = {u, upper, lower};
      const auto signs = s.msb_many(cmp_in);
      const Share w = add_public(scale_public(signs[0], Ring{0} - 2), Ring{1});

      const std::pair<Share, Share> sel[] = {
          {w, u}, {ones_minus(signs[1]), upper}, {ones_minus(signs[2]), -lower}};
      const auto selected = s.hadamard_many(sel);
      const Share abs_u = selected[0];
      const Share sigma = selected[1] + selected[2];

      // F = |u| - c; act = [F > 0] = msb(-F).
      const Share big_f = add_public(abs_u, -c);
      const Share act = s.msb(-big_f);
      const std::pair<Share, Share> gated[] = {{act, big_f}, {act, lambda}};
      const auto g = s.hadamard_many(gated);
      const Share& grad_lambda = g[0];
      const Share signed_lambda = s.hadamard(w, g[1]);

      // Gradients, and the lambda step which only needs grad_lambda.
      const std::pair<Share, Share> bwd[] = {{transposed(xi), sigma - yi},
                                             {at, signed_lambda}};
      const auto grads = s.mul_many(bwd);
      const std::pair<Share, int> bwd_shift[] = {
          {grads[0], f + cfg.batch_log2},
          {grads[1], f},
          {scale_public(grad_lambda, k_lambda), f}};
      const auto shifted = s.trunc_many(bwd_shift);

      const Share step =
          scale_public(shifted[0], k.k_bce) + scale_public(shifted[1], k.k_con);
      theta = theta - s.trunc(step, kStepFracBits);

      const Share lambda_next = lambda + shifted[2];
      lambda = s.hadamard(ones_minus(s.msb(lambda_next)), lambda_next);

      ++update;
      if (observer) observer(update, theta, lambda);
    }
  }

  TrainResult result{theta, std::nullopt, update};
  result.model = s.open_to(Party::kModeler, theta, OpenKind::kOutput);
  if (result.model) {
    for (Ring v : result.model->data()) {
      if (!in_range(v, f)) throw Error(ErrorCode::kOverflow, "trained model left the fixed-point range");
    }
  }
  return result;
}

DealSpec training_consumption(std::size_t n, std::size_t d, std::size_t p,
                              const TrainConfig& cfg) {
  validate_config(cfg, n);
  const std::size_t batch = cfg.batch();
  const std::size_t b = std::min(cfg.block, n);
  DealSpec once;
  once.matrix[{p, b, d}] = n / b;

  DealSpec per_batch;
  per_batch.matrix[{p, d, 1}] = 1;
  per_batch.matrix[{batch, d, 1}] = 1;
  per_batch.matrix[{d, batch, 1}] = 1;
  per_batch.matrix[{d, p, 1}] = 1;
  per_batch.hadamard = (p + 2 * batch) + 2 * p + p + p;
  per_batch.comparisons = (p + 2 * batch) + p + p;

  const std::size_t updates = static_cast<std::size_t>(cfg.epochs) * (n / batch);
  return once + per_batch * updates;
}

std::uint64_t training_exchanges(std::size_t n, const TrainConfig& cfg,
                                 TruncationMode mode) {
  validate_config(cfg, n);
  const bool hook = mode == TruncationMode::kDeterministic;
  const std::size_t b = std::min(cfg.block, n);
  constexpr std::uint64_t kMsb = 64;
  // mul, msb, hadamard, msb, hadamard, hadamard, mul, msb, hadamard.
  std::uint64_t per_batch = 6 + 3 * kMsb;
  if (hook) per_batch += 3;
  std::uint64_t setup = 1 /* sync */ + 1 /* A product */;
  if (hook) setup += 1 /* mean */ + 1 /* block shift */ + (n / b > 1 ? 1 : 0);
  const std::uint64_t updates = static_cast<std::uint64_t>(cfg.epochs) * (n / cfg.batch());
  return setup + per_batch * updates + 1 /* model transfer */;
}

}  // namespace fairmpc
