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

// Plaintext trainers and metrics.
//
// train_lagrangian_fixed() replays the MPC schedule of fairtrain.hpp on
// plaintext ring values, rounding at every point where the protocol
// truncates. It is bitwise equal to an MPC run with the deterministic
// truncation hook. The float trainers are the accuracy and fairness oracles;
// the projected-gradient and log-barrier trainers exist to reproduce their
// known failure modes.

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fairmpc/dataset.hpp"
#include "fairmpc/fairtrain.hpp"

namespace fairmpc {

enum class Arithmetic { kFloat, kFixed };
enum class SigmoidKind { kPiecewise, kLogistic, kChebyshev };

const char* arithmetic_name(Arithmetic a);

double sigmoid_piecewise(double v);
double sigmoid_logistic(double v);
// First-order least-squares fits of the logistic on each unit interval of
// [-5, 5], constant outside; coefficients are fit on first use.
double sigmoid_chebyshev(double v);
double sigmoid(SigmoidKind kind, double v);

// A = (1/n) Zc^T X, row-major p x d, with the exact column means.
std::vector<double> constraint_matrix(const Split& s);
// The same product with the protocol's shifts, in fixed point.
RingMatrix constraint_matrix_fixed(const Split& s, const TrainConfig& cfg,
                                   int frac_bits = kDefaultFracBits);

using FixedObserver = std::function<void(std::size_t update, std::span<const Ring> theta,
                                         std::span<const Ring> lambda)>;
using FloatObserver = std::function<void(std::size_t update, std::span<const double> theta,
                                         std::span<const double> lambda)>;

// Raw fixed-point theta (d entries).
std::vector<Ring> train_lagrangian_fixed(const Split& s, std::span<const double> slack,
                                         const TrainConfig& cfg,
                                         int frac_bits = kDefaultFracBits,
                                         const FixedObserver& observer = {});
std::vector<double> train_lagrangian_float(const Split& s, std::span<const double> slack,
                                           const TrainConfig& cfg,
                                           SigmoidKind sigmoid = SigmoidKind::kPiecewise,
                                           const FloatObserver& observer = {});
// Decoded theta from either arithmetic.
std::vector<double> train_lagrangian(const Split& s, std::span<const double> slack,
                                     const TrainConfig& cfg, Arithmetic arithmetic);

// The float Lagrangian loop without the constraint terms.
std::vector<double> train_unconstrained(const Split& s, const TrainConfig& cfg,
                                        SigmoidKind sigmoid = SigmoidKind::kPiecewise);

// (I - A^T (A A^T)^-1 A) g for the given rows of A (row-major, k x d). Falls
// back to the pseudo-inverse when A A^T is singular and counts it.
std::vector<double> project_gradient(std::span<const double> rows, std::size_t d,
                                     std::span<const double> g, std::size_t* fallbacks = nullptr);

struct ProjectedResult {
  std::vector<double> theta;
  std::size_t fallbacks = 0;  // singular A A^T, pseudo-inverse used
};
ProjectedResult train_projected(const Split& s, std::span<const double> slack,
                                const TrainConfig& cfg);

struct BarrierSchedule {
  double t0 = 1.0;
  double growth = 1.5;  // t is multiplied by this after every epoch
};
// -(1/t) * sum_j [log(c_j + a_j theta) + log(c_j - a_j theta)] and its
// gradient. Throws kInfeasibleIterate outside the strict interior.
double barrier_value(std::span<const double> a, std::size_t d, std::span<const double> slack,
                     std::span<const double> theta, double t);
std::vector<double> barrier_gradient(std::span<const double> a, std::size_t d,
                                     std::span<const double> slack,
                                     std::span<const double> theta, double t);
// Throws kInfeasibleIterate when an iterate leaves the barrier's domain.
std::vector<double> train_iplb(const Split& s, std::span<const double> slack,
                               const TrainConfig& cfg, BarrierSchedule schedule = {});

struct MetricsReport {
  double accuracy = 0;
  double frac_pos_z0 = 0;
  double frac_pos_z1 = 0;
  double p_percent = 0;
  double constraint_max = 0;  // max_j |a_j theta| - c_j on this split
};

// p% rule with the conventions: both rates zero -> 100, one zero -> 0.
double p_rule(double rate0, double rate1);
// Decisions are x^T theta >= 0; groups by the first sensitive attribute.
MetricsReport evaluate(std::span<const double> theta, const Split& s,
                       std::span<const double> slack);

// Slack grid: `points` log-spaced values from hi down to lo.
std::vector<double> slack_grid(std::size_t points = 20, double lo = 1e-4, double hi = 1.0);

enum class Method { kLagrangian, kProjected, kIplb, kUnconstrained, kMpc };
const char* method_name(Method m);
Method parse_method(const std::string& name);

struct SweepRow {
  double c = 0;
  Method method = Method::kLagrangian;
  Arithmetic arithmetic = Arithmetic::kFloat;
  MetricsReport metrics;  // NaN fields when training aborted
};

// Plaintext sweep over the grid (kMpc is not handled here). Runs are
// independent and spread over `threads` workers; rows come back in
// (c, method, arithmetic) order.
std::vector<SweepRow> run_sweep(const Dataset& data, std::span<const double> grid,
                                std::span<const Method> methods, const TrainConfig& cfg,
                                unsigned threads = 1);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

double l2_norm(std::span<const double> v);

}  // namespace fairmpc
