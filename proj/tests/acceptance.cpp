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


// Acceptance suite. Prints one PASS/FAIL line per criterion with the measured
// values next to the pinned thresholds. Exit status is nonzero when the set of
// failing criteria differs from --expect-fail, so a known shortfall stays
// visible without masking new regressions.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fairmpc/dataset.hpp"
#include "fairmpc/pipeline.hpp"
#include "fairmpc/protocols.hpp"
#include "fairmpc/reference.hpp"
#include "support.hpp"

namespace fairmpc {
namespace {

// Pinned parameters.
constexpr int kFracBits = 16;
constexpr std::size_t kSamples = 100000;
constexpr double kRingSeconds = 10.0;
constexpr std::int64_t kTruncUlp = 1;
constexpr std::size_t kSigmoidPoints = 10000;
constexpr std::int64_t kSigmoidUlp = 2;
constexpr std::size_t kTrainRows = 4096;
constexpr double kCorrelation = 0.8;
constexpr double kTrajectoryLinf = 1e-2;
constexpr double kTrainSeconds = 300.0;
constexpr int kSweepEpochs = 234;
constexpr double kLooseGap = 0.2;
constexpr double kTightGap = 0.05;
constexpr double kAccuracyGap = 0.02;
constexpr int kAttestSeeds = 10;
constexpr double kCertifySeconds = 1.0;
constexpr double kShrink = 10.0;
constexpr double kPathologyPercent = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Share& mine(const Session& s, const std::pair<Share, Share>& sh) {
  return s.is_modeler() ? sh.first : sh.second;
}

RingMatrix open_both(const DealSpec& spec, std::uint64_t seed,
                     const std::function<Share(Session&)>& body,
                     SessionOptions options = {}) {
  RingMatrix out;
  testing::run_symmetric(
      spec, seed,
      [&](Session& s) {
        const auto r = s.open(body(s));
        if (s.is_modeler()) out = r;
      },
      options);
  return out;
}

double gap(const MetricsReport& m) { return std::abs(m.frac_pos_z0 - m.frac_pos_z1); }

Outcome ring_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  Prg rng(101);
  RingMatrix x(kSamples, 1), y(kSamples, 1);
  for (auto& v : x.values()) v = rng.next_u64();
  for (auto& v : y.values()) v = rng.next_u64();
  const auto sx = split(x, rng), sy = split(y, rng);
  std::size_t split_bad = 0;
  const RingMatrix back = reconstruct(sx.first, sx.second);
  for (std::size_t i = 0; i < kSamples; ++i) split_bad += back[i] != x[i];

  DealSpec spec;
  spec.hadamard = kSamples;
  spec.matrix[{64, 32, 16}] = 1;
  RingMatrix a(64, 32), b(32, 16);
  for (auto& v : a.values()) v = rng.next_u64();
  for (auto& v : b.values()) v = rng.next_u64();
  const auto sa = split(a, rng), sb = split(b, rng);
  RingMatrix prod, mat;
  testing::run_symmetric(spec, 102, [&](Session& s) {
    const auto p = s.open(s.hadamard(mine(s, sx), mine(s, sy)));
    const auto m = s.open(s.mul(mine(s, sa), mine(s, sb)));
    if (s.is_modeler()) {
      prod = p;
      mat = m;
    }
  });
  std::size_t mul_bad = 0;
  for (std::size_t i = 0; i < kSamples; ++i) mul_bad += prod[i] != x[i] * y[i];
  const bool mat_ok = mat == matmul(a, b);
  const double secs = since(t0);
  return {split_bad == 0 && mul_bad == 0 && mat_ok && secs < kRingSeconds,
          fmt("split mismatches %zu/%zu, product mismatches %zu/%zu, matrix product %s, %.2f s (limit %.0f s)",
              split_bad, kSamples, mul_bad, kSamples, mat_ok ? "exact" : "WRONG", secs, kRingSeconds)};
}

Outcome truncation_bound() {
  Prg rng(201);
  RingMatrix x(kSamples, 1), y(kSamples, 1);
  for (std::size_t i = 0; i < kSamples; ++i) {
    x[i] = encode_raw((rng.next_unit() - 0.5) * 362.0, kFracBits);
    y[i] = encode_raw((rng.next_unit() - 0.5) * 362.0, kFracBits);
  }
  const auto sx = split(x, rng), sy = split(y, rng);
  DealSpec spec;
  spec.hadamard = kSamples;
  const RingMatrix got = open_both(spec, 202, [&](Session& s) {
    return s.trunc(s.hadamard(mine(s, sx), mine(s, sy)), kFracBits);
  });
  std::size_t larger = 0;
  __int128 worst = 0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    const __int128 exact = static_cast<__int128>(as_signed(x[i])) * as_signed(y[i]);
    __int128 dev = static_cast<__int128>(as_signed(got[i])) * (__int128{1} << kFracBits) - exact;
    if (dev < 0) dev = -dev;
    worst = std::max(worst, dev);
    larger += dev > (static_cast<__int128>(kTruncUlp) << kFracBits);
  }
  const double worst_ulp = static_cast<double>(worst) / std::ldexp(1.0, kFracBits);
  return {larger == 0, fmt("deviations above %lld ulp: %zu/%zu, worst %.4f ulp",
                           static_cast<long long>(kTruncUlp), larger, kSamples, worst_ulp)};
}

Outcome comparison_oracle() {
  Prg rng(301);
  std::vector<std::uint8_t> x1(256), x2(256);
  std::vector<BasicConversionTuple<std::uint8_t>> c1, c2;
  std::vector<AndTriple> a1, a2;
  for (int v = 0; v < 256; ++v) {
    x2[v] = static_cast<std::uint8_t>(rng.next_u64());
    x1[v] = static_cast<std::uint8_t>(v - x2[v]);
    auto [p, q] = deal_conversion<std::uint8_t>(rng);
    c1.push_back(p);
    c2.push_back(q);
    auto [g, h] = deal_and(rng);
    a1.push_back(g);
    a2.push_back(h);
  }
  std::vector<std::uint8_t> m1, m2;
  testing::run_links([&](Link& l) { m1 = proto::secure_msb<std::uint8_t>(l, x1, c1, a1); },
                     [&](Link& l) { m2 = proto::secure_msb<std::uint8_t>(l, x2, c2, a2); });
  int small_ok = 0;
  for (int v = 0; v < 256; ++v) small_ok += static_cast<std::uint8_t>(m1[v] + m2[v]) == (v >> 7);

  RingMatrix x(kSamples, 1);
  for (auto& v : x.values()) v = rng.next_u64();
  const auto sx = split(x, rng);
  DealSpec spec;
  spec.comparisons = kSamples;
  const RingMatrix got = open_both(spec, 302, [&](Session& s) { return s.msb(mine(s, sx)); });
  std::size_t big_ok = 0;
  for (std::size_t i = 0; i < kSamples; ++i) big_ok += got[i] == msb(x[i]);
  return {small_ok == 256 && big_ok == kSamples,
          fmt("8-bit exhaustive %d/256, 64-bit random %zu/%zu", small_ok, big_ok, kSamples)};
}

// The three-piece definition on raw fixed-point values.
std::int64_t sigmoid_definition(std::int64_t v) {
  const std::int64_t half = std::int64_t{1} << (kFracBits - 1);
  if (v < -half) return 0;
  if (v > half) return std::int64_t{1} << kFracBits;
  return v + half;
}

Outcome sigmoid_accuracy() {
  Prg rng(401);
  const std::int64_t half = std::int64_t{1} << (kFracBits - 1);
  std::vector<std::int64_t> points = {0, half, -half, half + 1, half - 1, -half + 1, -half - 1};
  while (points.size() < kSigmoidPoints) {
    points.push_back(static_cast<std::int64_t>(rng.next_u64() % (std::uint64_t{1} << 19)) -
                     (std::int64_t{1} << 18));
  }
  RingMatrix v(2 * points.size(), 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    v[i] = as_ring(points[i]);
    v[i + points.size()] = as_ring(-points[i]);
  }
  const auto sv = split(v, rng);
  DealSpec spec;
  spec.comparisons = 2 * v.size();
  spec.hadamard = 2 * v.size();
  const RingMatrix got = open_both(spec, 402, [&](Session& s) { return s.sigmoid_pw(mine(s, sv)); });
  std::int64_t worst_def = 0, worst_anti = 0;
  const std::int64_t one = std::int64_t{1} << kFracBits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    worst_def = std::max(worst_def, std::abs(as_signed(got[i]) - sigmoid_definition(as_signed(v[i]))));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    worst_anti = std::max(
        worst_anti, std::abs(as_signed(got[i + points.size()]) - (one - as_signed(got[i]))));
  }
  return {worst_def <= kSigmoidUlp && worst_anti <= kSigmoidUlp,
          fmt("%zu points incl. +-1/2, max deviation from definition %lld ulp, max antisymmetry error %lld ulp (limit %lld)",
              points.size(), static_cast<long long>(worst_def), static_cast<long long>(worst_anti),
              static_cast<long long>(kSigmoidUlp))};
}

Outcome reference_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset data = synth(kTrainRows, kCorrelation, 501);
  const TrainConfig cfg;  // 10 epochs, minibatch 64, block 256
  const double slack[] = {1e-3};
  std::vector<std::vector<Ring>> want;
  const auto final_fixed = train_lagrangian_fixed(
      data.train, slack, cfg, kFracBits,
      [&](std::size_t, std::span<const Ring> th, std::span<const Ring>) {
        want.emplace_back(th.begin(), th.end());
      });
  SessionOptions hook;
  hook.truncation = TruncationMode::kDeterministic;
  const auto exact = train_local(data.train, slack, cfg, hook, 502, 503, true);
  std::size_t first_diff = want.size();
  if (exact.trajectory.size() == want.size()) {
    for (std::size_t t = 0; t < want.size(); ++t) {
      if (exact.trajectory[t] != want[t]) {
        first_diff = t;
        break;
      }
    }
  } else {
    first_diff = 0;
  }
  const bool bitwise = first_diff == want.size() && exact.theta_raw == final_fixed;

  const auto loose = train_local(data.train, slack, cfg, {}, 504, 505);
  double linf = 0;
  for (std::size_t j = 0; j < final_fixed.size(); ++j) {
    linf = std::max(linf, std::abs(loose.theta[j] - decode_raw(final_fixed[j], kFracBits)));
  }
  const double secs = since(t0);
  return {bitwise && linf <= kTrajectoryLinf && secs < kTrainSeconds,
          fmt("hook trajectory %s over %zu updates, probabilistic L-inf %.2e (limit %.0e), %.1f s (limit %.0f s)",
              bitwise ? "bitwise identical" : fmt("differs from update %zu", first_diff + 1).c_str(),
              want.size(), linf, kTrajectoryLinf, secs, kTrainSeconds)};
}

Outcome sweep() {
  const Dataset data = synth(kTrainRows, kCorrelation, 601);
  TrainConfig cfg;
  cfg.epochs = kSweepEpochs;
  const auto grid = slack_grid();
  double worst_acc = 0, worst_c = 0;
  for (double c : grid) {
    const double slack[] = {c};
    const auto fl = evaluate(train_lagrangian(data.train, slack, cfg, Arithmetic::kFloat), data.test, slack);
    const auto fx = evaluate(train_lagrangian(data.train, slack, cfg, Arithmetic::kFixed), data.test, slack);
    if (std::abs(fl.accuracy - fx.accuracy) > worst_acc) {
      worst_acc = std::abs(fl.accuracy - fx.accuracy);
      worst_c = c;
    }
  }
  const double loose_c[] = {grid.front()}, tight_c[] = {grid.back()};
  const auto loose = train_local(data.train, loose_c, cfg, {}, 602, 603);
  const auto tight = train_local(data.train, tight_c, cfg, {}, 604, 605);
  const double g_loose = gap(evaluate(loose.theta, data.test, loose_c));
  const double g_tight = gap(evaluate(tight.theta, data.test, tight_c));
  return {g_loose >= kLooseGap && g_tight <= kTightGap && worst_acc <= kAccuracyGap,
          fmt("MPC gap %.3f at c=%.0e (need >= %.2f), %.3f at c=%.0e (need <= %.2f); "
              "max |fixed - float| accuracy %.4f at c=%.2e (limit %.2f)",
              g_loose, grid.front(), kLooseGap, g_tight, grid.back(), kTightGap, worst_acc, worst_c,
              kAccuracyGap)};
}

Outcome attestation() {
  int accepted = 0, perturbations = 0, rejected = 0;
  double worst_seconds = 0;
  const double slack[] = {1.0};
  TrainConfig cfg;
  for (int seed = 1; seed <= kAttestSeeds; ++seed) {
    const Dataset data = synth(kTrainRows, kCorrelation, 700 + seed);
    cfg.seed = seed;
    const auto theta = train_lagrangian_fixed(data.train, slack, cfg, kFracBits);
    const auto cert = certify_local(theta, data.train, slack, cfg, {}, 710 + seed, seed);
    worst_seconds = std::max(worst_seconds, cert.seconds);
    if (!cert.fair || !cert.regulator_half) continue;
    const Split& t = data.test;
    const std::span<const double> row(t.x.data(), t.d);
    double score = 0;
    for (std::size_t j = 0; j < t.d; ++j) score += row[j] * decode_raw(theta[j], kFracBits);
    const int decision = score >= 0 ? 1 : 0;
    const auto ok = verify_local(theta, *cert.modeler_half, *cert.regulator_half, row, decision, {}, 720 + seed);
    accepted += ok.model_match.value_or(false) && ok.decision_match.value_or(false);
    for (std::size_t j = 0; j < theta.size(); ++j) {
      for (Ring delta : {Ring{1}, ~Ring{0}}) {
        auto bad = theta;
        bad[j] += delta;
        const auto r = verify_local(bad, *cert.modeler_half, *cert.regulator_half, row, decision, {},
                                    730 + seed * 16 + j);
        ++perturbations;
        rejected += r.model_match == std::optional<bool>(false);
      }
    }
  }
  return {accepted == kAttestSeeds && rejected == perturbations && perturbations > 0 &&
              worst_seconds <= kCertifySeconds,
          fmt("accepted %d/%d, 1-ulp perturbations rejected %d/%d, certification online time max %.3f s (limit %.1f s)",
              accepted, kAttestSeeds, rejected, perturbations, worst_seconds, kCertifySeconds)};
}

Outcome equality_brute_force() {
  // Every difference against every odd mask in one batch of 256 * 128.
  std::vector<std::uint8_t> d1, d2, o1, o2, diffs, masks;
  std::vector<BasicHadamardTriple<std::uint8_t>> h1, h2;
  Prg rng(801);
  for (int d = 0; d < 256; ++d) {
    for (int r = 1; r < 256; r += 2) {
      const auto share = static_cast<std::uint8_t>(rng.next_u64());
      d2.push_back(share);
      d1.push_back(static_cast<std::uint8_t>(d - share));
      const auto mask_share = static_cast<std::uint8_t>(rng.next_u64());
      o2.push_back(mask_share);
      o1.push_back(static_cast<std::uint8_t>(r - mask_share));
      auto [p, q] = deal_hadamard<std::uint8_t>(rng);
      h1.push_back(p);
      h2.push_back(q);
      diffs.push_back(static_cast<std::uint8_t>(d));
      masks.push_back(static_cast<std::uint8_t>(r));
    }
  }
  std::vector<Ring> opened;
  testing::run_links(
      [&](Link& l) { proto::eq_test<std::uint8_t>(l, d1, o1, h1, Party::kRegulator); },
      [&](Link& l) { opened = proto::eq_test<std::uint8_t>(l, d2, o2, h2, Party::kRegulator).opened; });
  std::size_t wrong = 0, value_wrong = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    const bool zero = static_cast<std::uint8_t>(opened.at(i)) == 0;
    wrong += zero != (diffs[i] == 0);
    value_wrong += static_cast<std::uint8_t>(opened[i]) != static_cast<std::uint8_t>(diffs[i] * masks[i]);
  }
  return {wrong == 0 && value_wrong == 0 && opened.size() == 256u * 128u,
          fmt("%zu (difference, odd mask) pairs, zero-iff-equal violations %zu, opened != r*d %zu",
              diffs.size(), wrong, value_wrong)};
}

Outcome pathology() {
  const Dataset data = synth(kTrainRows, kCorrelation, 901);
  TrainConfig cfg;
  cfg.epochs = kSweepEpochs;
  const double loose[] = {1.0};
  const auto grid = slack_grid();
  const double tight[] = {grid.back()};
  const double norm_free = l2_norm(train_unconstrained(data.train, cfg));
  const auto proj = train_projected(data.train, tight, cfg);
  const auto m_train = evaluate(proj.theta, data.train, tight);
  const auto m_test = evaluate(proj.theta, data.test, tight);
  const double shrink = norm_free / l2_norm(proj.theta);
  const bool satisfied = m_train.constraint_max <= 0;

  int aborted = 0, tried = 0;
  for (double c : grid) {
    if (c > 1e-3) continue;
    const double s[] = {c};
    ++tried;
    try {
      train_iplb(data.train, s, cfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInfeasibleIterate) ++aborted;
    }
  }
  (void)loose;
  const bool proj_ok = satisfied && shrink >= kShrink && m_test.p_percent < kPathologyPercent;
  return {proj_ok && aborted >= 1,
          fmt("projected at c=%.0e: constraint %s (max %.2e), norm shrink %.2fx (need >= %.0fx), "
              "p%% %.1f (need < %.0f); IPLB aborted %d/%d in the tightest decade",
              grid.back(), satisfied ? "satisfied" : "violated", m_train.constraint_max, shrink, kShrink,
              m_test.p_percent, kPathologyPercent, aborted, tried)};
}

}  // namespace
}  // namespace fairmpc

int main(int argc, char** argv) {
  using namespace fairmpc;
  CLI::App app{"fairmpc acceptance suite"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"ring correctness", ring_correctness},
      {"truncation bound", truncation_bound},
      {"comparison oracle", comparison_oracle},
      {"sigmoid", sigmoid_accuracy},
      {"MPC equals reference", reference_equivalence},
      {"fairness-accuracy sweep", sweep},
      {"attestation", attestation},
      {"equality brute force", equality_brute_force},
      {"pathology reproduction", pathology},
  };
  const std::set<int> selected(only.begin(), only.end());
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::set<int> failed, ran;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    ran.insert(id);
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::set<int> expected_ran;
  for (int id : expected) {
    if (ran.count(id)) expected_ran.insert(id);
  }
  if (failed != expected_ran) {
    std::printf("unexpected outcome: failing set differs from --expect-fail\n");
    return 1;
  }
  return 0;
}
