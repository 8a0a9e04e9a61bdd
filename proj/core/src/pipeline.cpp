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

#include "fairmpc/pipeline.hpp"

#include <chrono>
#include <mutex>

namespace fairmpc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

LocalTrainResult train_local(const Split& s, std::span<const double> slack,
                             const TrainConfig& cfg, const SessionOptions& options,
                             std::uint64_t dealer_seed, std::uint64_t share_seed,
                             bool record_trajectory) {
  const int f = options.frac_bits;
  const RingMatrix x = encode_features(s, f);
  const RingMatrix y = encode_labels(s, f);
  Prg user_rng(share_seed);
  auto [z1, z2] = share_sensitive(s, user_rng, f);

  const SharedData modeler_data{trivial_share(Party::kModeler, Party::kModeler, x),
                                trivial_share(Party::kModeler, Party::kModeler, y), z1};
  const SharedData regulator_data{trivial_share(Party::kRegulator, Party::kModeler, x),
                                  trivial_share(Party::kRegulator, Party::kModeler, y), z2};

  LocalTrainResult result;
  std::mutex mutex;
  std::vector<std::vector<Ring>> halves[2];
  auto observer_for = [&](int side) -> TrainObserver {
    if (!record_trajectory) return {};
    return [&, side](std::size_t, const Share& theta, const Share&) {
      std::lock_guard lock(mutex);
      halves[side].push_back(theta.values.data());
    };
  };

  StreamingDealer dealer(dealer_seed);
  std::optional<RingMatrix> model;
  const auto start = std::chrono::steady_clock::now();
  result.stats = run_two_party(
      dealer.endpoint(Party::kModeler), dealer.endpoint(Party::kRegulator), options,
      [&](Session& session) {
        model = train(session, modeler_data, slack, cfg, observer_for(0)).model;
      },
      [&](Session& session) { train(session, regulator_data, slack, cfg, observer_for(1)); });
  result.seconds = seconds_since(start);

  result.theta_raw = model->data();
  for (Ring v : result.theta_raw) result.theta.push_back(decode_raw(v, f));
  for (std::size_t t = 0; t < halves[0].size(); ++t) {
    std::vector<Ring> step(halves[0][t].size());
    for (std::size_t j = 0; j < step.size(); ++j) step[j] = halves[0][t][j] + halves[1][t][j];
    result.trajectory.push_back(std::move(step));
  }
  return result;
}

LocalCertifyResult certify_local(std::span<const Ring> theta_raw, const Split& s,
                                 std::span<const double> slack, const TrainConfig& cfg,
                                 const SessionOptions& options, std::uint64_t seed,
                                 std::uint64_t session_id) {
  const int f = options.frac_bits;
  const std::size_t d = theta_raw.size();
  const RingMatrix x = encode_features(s, f);
  const RingMatrix theta(d, 1, {theta_raw.begin(), theta_raw.end()});
  Prg rng(seed);
  auto [z1, z2] = share_sensitive(s, rng, f);
  auto [pool1, pool2] = deal(certify_consumption(s.n, d, s.p, cfg), rng);
  Prg modeler_rng = rng.fork();
  Prg regulator_rng = rng.fork();

  LocalCertifyResult result;
  const auto start = std::chrono::steady_clock::now();
  result.stats = run_two_party(
      pool1, pool2, options,
      [&](Session& session) {
        const Share xs = trivial_share(Party::kModeler, Party::kRegulator, RingMatrix(s.n, d));
        auto r = certify(session, &theta, d, xs, z1, slack, cfg, session_id, modeler_rng);
        result.modeler_half = std::move(r.commitment);
      },
      [&](Session& session) {
        const Share xs = trivial_share(Party::kRegulator, Party::kRegulator, x);
        auto r = certify(session, nullptr, d, xs, z2, slack, cfg, session_id, regulator_rng);
        result.fair = r.fair.value_or(false);
        result.violations = r.violations.value_or(0);
        result.regulator_half = std::move(r.commitment);
      });
  result.seconds = seconds_since(start);
  return result;
}

VerifyResult verify_local(std::span<const Ring> theta_prime, const Commitment& modeler_half,
                          const Commitment& regulator_half, std::span<const double> x_row,
                          int y_claimed, const SessionOptions& options, std::uint64_t seed) {
  const std::size_t d = theta_prime.size();
  const RingMatrix theta(d, 1, {theta_prime.begin(), theta_prime.end()});
  const RingMatrix x = encode_matrix(1, d, x_row, options.frac_bits);
  Prg rng(seed);
  auto [pool1, pool2] = deal(verify_consumption(d), rng);
  Prg modeler_rng = rng.fork();
  Prg regulator_rng = rng.fork();
  VerifyResult result;
  run_two_party(
      pool1, pool2, options,
      [&](Session& session) {
        verify(session, &theta, modeler_half, nullptr, std::nullopt, modeler_rng);
      },
      [&](Session& session) {
        result = verify(session, nullptr, regulator_half, &x, y_claimed, regulator_rng);
      });
  return result;
}

}  // namespace fairmpc
