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


// Online-phase cost of the main protocols over the in-process transport.
// Dealing is excluded from the timed region.

#include <benchmark/benchmark.h>

#include <functional>

#include "fairmpc/dataset.hpp"
#include "fairmpc/fairtrain.hpp"
#include "fairmpc/mpc.hpp"
#include "fairmpc/pipeline.hpp"
#include "fairmpc/reference.hpp"

namespace fairmpc {
namespace {

std::pair<Share, Share> random_shares(std::size_t rows, std::size_t cols, Prg& rng) {
  RingMatrix x(rows, cols);
  for (auto& v : x.values()) v = rng.next_u64() >> 20;
  return split(x, rng);
}

void run_online(benchmark::State& state, const DealSpec& spec,
                const std::function<void(Session&)>& body) {
  Prg rng(state.iterations() + 1);
  state.PauseTiming();
  auto [p1, p2] = deal(spec, rng);
  state.ResumeTiming();
  const auto stats = run_two_party(p1, p2, {}, body, body);
  state.counters["exchanges"] = static_cast<double>(stats.steps);
  state.counters["bytes"] = static_cast<double>(stats.bytes_modeler);
}

void BM_MatrixMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Prg rng(1);
  const auto a = random_shares(n, n, rng), b = random_shares(n, n, rng);
  DealSpec spec;
  spec.matrix[{n, n, n}] = 1;
  for (auto _ : state) {
    run_online(state, spec, [&](Session& s) {
      benchmark::DoNotOptimize(s.mul(s.is_modeler() ? a.first : a.second,
                                     s.is_modeler() ? b.first : b.second));
    });
  }
}
BENCHMARK(BM_MatrixMul)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Hadamard(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Prg rng(2);
  const auto a = random_shares(n, 1, rng), b = random_shares(n, 1, rng);
  DealSpec spec;
  spec.hadamard = n;
  for (auto _ : state) {
    run_online(state, spec, [&](Session& s) {
      benchmark::DoNotOptimize(s.hadamard(s.is_modeler() ? a.first : a.second,
                                          s.is_modeler() ? b.first : b.second));
    });
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Hadamard)->Arg(1 << 10)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_Msb(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Prg rng(3);
  const auto a = random_shares(n, 1, rng);
  DealSpec spec;
  spec.comparisons = n;
  for (auto _ : state) {
    run_online(state, spec, [&](Session& s) {
      benchmark::DoNotOptimize(s.msb(s.is_modeler() ? a.first : a.second));
    });
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Msb)->Arg(64)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  const Dataset data = synth(static_cast<std::size_t>(state.range(0)), 0.8, 4);
  TrainConfig cfg;
  cfg.epochs = 1;
  const double slack[] = {0.05};
  for (auto _ : state) {
    const auto r = train_local(data.train, slack, cfg, {}, 5, 6);
    state.SetIterationTime(r.seconds);
    state.counters["exchanges"] = static_cast<double>(r.stats.steps);
  }
}
BENCHMARK(BM_Train)->Arg(1 << 12)->Arg(1 << 14)->UseManualTime()->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& state) {
  const Dataset data = synth(static_cast<std::size_t>(state.range(0)), 0.8, 7);
  TrainConfig cfg;
  const double slack[] = {0.05};
  const auto theta = train_lagrangian_fixed(data.train, slack, cfg, kDefaultFracBits);
  for (auto _ : state) {
    const auto r = certify_local(theta, data.train, slack, cfg, {}, 8);
    state.SetIterationTime(r.seconds);
    state.counters["exchanges"] = static_cast<double>(r.stats.steps);
  }
}
BENCHMARK(BM_Certify)->Arg(1 << 12)->Arg(1 << 14)->UseManualTime()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fairmpc

BENCHMARK_MAIN();
