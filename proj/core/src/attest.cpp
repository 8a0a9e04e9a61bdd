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

#include "fairmpc/attest.hpp"

#include <algorithm>
#include <chrono>

#include "fairmpc/fpsh.hpp"

namespace fairmpc {

void save_commitment(const std::filesystem::path& path, const Commitment& c) {
  write_container(path, Container{c.theta.party,
                                  ObjectType::kCommitment,
                                  {c.session_id, static_cast<Ring>(c.created_unix)},
                                  c.theta.values});
}

Commitment load_commitment(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kNoCommitment, "no commitment at " + path.string());
  }
  Container c = read_container(path);
  if (c.type != ObjectType::kCommitment || c.body.cols() != 1) {
    throw Error(ErrorCode::kBadFormat, path.string() + " is not a commitment");
  }
  return {c.prefix[0], static_cast<std::int64_t>(c.prefix[1]),
          Share{c.party, std::move(c.body)}};
}

CertifyResult certify(Session& s, const RingMatrix* theta, std::size_t d,
                      const Share& x, const Share& z, std::span<const double> slack,
                      const TrainConfig& cfg, std::uint64_t session_id, Prg& rng) {
  const std::size_t n = x.rows(), p = z.cols();
  if (x.cols() != d || z.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch, "certification data shapes differ");
  }
  if (slack.size() != p) throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  const int f = s.frac_bits();
  const RingMatrix c = encode_slack(slack, f);

  std::vector<Ring> config = {n, d, p, cfg.block, session_id, static_cast<Ring>(f)};
  config.insert(config.end(), c.data().begin(), c.data().end());
  s.link().sync(config);

  const Share th = s.input(Party::kModeler, theta, d, 1, rng);
  const Share zc = center_sensitive(s, z);
  const Share a = build_constraint(s, zc, x, cfg);
  const Share u = s.trunc(s.mul(a, th), f);
  const Share w = add_public(scale_public(s.msb(u), Ring{0} - 2), Ring{1});
  const Share big_f = add_public(s.hadamard(w, u), -c);
  const Share act = s.msb(-big_f);

  RingMatrix count(1, 1);
  for (Ring v : act.values.data()) count[0] += v;
  const auto opened = s.open_to(Party::kRegulator, {s.party(), count}, OpenKind::kVerdict);

  CertifyResult result;
  if (opened) {
    result.violations = (*opened)[0];
    result.fair = (*opened)[0] == 0;
  }

  // Re-randomize on every run so the modeler's view is the same for both
  // verdicts; the regulator simply drops its half of an unfair model.
  std::vector<Ring> zeta;
  if (!s.is_modeler()) {
    zeta.resize(d);
    for (auto& v : zeta) v = rng.next_u64();
  }
  const auto received = s.link().transfer(Party::kRegulator, Tag::kShareIn, zeta,
                                          OpenKind::kInputMask);
  Share fresh = th;
  for (std::size_t j = 0; j < d; ++j) {
    if (s.is_modeler()) {
      if (received.size() != d) throw Error(ErrorCode::kPeerDesync, "re-randomizer has the wrong length");
      fresh.values[j] += received[j];
    } else {
      fresh.values[j] -= zeta[j];
    }
  }
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  Commitment commitment{session_id,
                        std::chrono::duration_cast<std::chrono::seconds>(now).count(),
                        std::move(fresh)};
  if (s.is_modeler() || result.fair.value_or(false)) result.commitment = std::move(commitment);
  return result;
}

VerifyResult verify(Session& s, const RingMatrix* theta_prime, const Commitment& committed,
                    const RingMatrix* x, std::optional<int> y_claimed, Prg& rng) {
  const std::size_t d = committed.dimension();
  if (committed.theta.party != s.party()) {
    throw Error(ErrorCode::kSameParty, "commitment belongs to the other party");
  }
  if (!s.is_modeler() && (x == nullptr || x->rows() != 1 || x->cols() != d || !y_claimed)) {
    throw Error(ErrorCode::kShapeMismatch, "the regulator needs a 1 x d query and a claim");
  }
  const Ring config[] = {d, committed.session_id, static_cast<Ring>(s.frac_bits())};
  s.link().sync(config);

  const Share th = s.input(Party::kModeler, theta_prime, d, 1, rng);
  const auto equal = s.eq_test(th, committed.theta, Party::kRegulator);

  // The regulator tells the modeler whether to continue. An honest modeler
  // knows the answer already, since it chose which model to present.
  const Ring go[] = {equal.value_or(false) ? Ring{1} : Ring{0}};
  const auto flag = s.link().transfer(Party::kRegulator, Tag::kSync,
                                      s.is_modeler() ? std::span<const Ring>{} : go,
                                      OpenKind::kVerdict);
  const bool proceed = s.is_modeler() ? (!flag.empty() && flag[0] == 1) : *equal;

  VerifyResult result;
  result.model_match = equal;
  if (!proceed) return result;

  const Share xs = trivial_share(s.party(), Party::kRegulator,
                                 s.is_modeler() ? RingMatrix(1, d) : *x);
  const Share score = s.mul(xs, th);
  const Share decision = add_public(-s.msb(score), Ring{1});
  const auto opened = s.open_to(Party::kRegulator, decision, OpenKind::kVerdict);
  if (opened) result.decision_match = static_cast<int>((*opened)[0]) == *y_claimed;
  return result;
}

DealSpec certify_consumption(std::size_t n, std::size_t d, std::size_t p,
                             const TrainConfig& cfg) {
  const std::size_t b = std::min(cfg.block, n);
  DealSpec spec;
  spec.matrix[{p, b, d}] = n / b;
  spec.matrix[{p, d, 1}] = 1;
  spec.hadamard = p;
  spec.comparisons = 2 * p;
  return spec;
}

DealSpec verify_consumption(std::size_t d) {
  DealSpec spec;
  spec.matrix[{1, d, 1}] = 1;
  spec.hadamard = d;
  spec.odd_masks = d;
  spec.comparisons = 1;
  return spec;
}

}  // namespace fairmpc
