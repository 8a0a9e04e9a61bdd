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

#include "fairmpc/reference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace fairmpc {

namespace {

template <class Fn>
RingMatrix map(const RingMatrix& a, Fn fn) {
  RingMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i]);
  return out;
}

template <class Fn>
RingMatrix zip(const RingMatrix& a, const RingMatrix& b, Fn fn) {
  RingMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
  return out;
}

RingMatrix round_shift(const RingMatrix& a, int bits) {
  return map(a, [bits](Ring v) { return round_trunc(v, bits); });
}

// Float view of a split and its constraint matrix.
struct FloatProblem {
  std::size_t n, d, p;
  const Split& s;
  std::vector<double> a;  // p x d

  explicit FloatProblem(const Split& split)
      : n(split.n), d(split.d), p(split.p), s(split), a(constraint_matrix(split)) {}

  double row_dot(std::size_t i, std::span<const double> theta) const {
    double acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc += s.x_at(i, j) * theta[j];
    return acc;
  }
  double a_dot(std::size_t k, std::span<const double> theta) const {
    double acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc += a[k * d + j] * theta[j];
    return acc;
  }
  // X_i^T (sigma - y_i) / |batch|.
  std::vector<double> bce_gradient(std::span<const std::size_t> rows,
                                   std::span<const double> theta, SigmoidKind kind) const {
    std::vector<double> g(d, 0.0);
    for (auto i : rows) {
      const double r = sigmoid(kind, row_dot(i, theta)) - s.y[i];
      for (std::size_t j = 0; j < d; ++j) g[j] += s.x_at(i, j) * r;
    }
    for (auto& v : g) v /= static_cast<double>(rows.size());
    return g;
  }
};

std::vector<double> lagrangian_float(const Split& s, std::span<const double> slack,
                                     const TrainConfig& cfg, SigmoidKind kind,
                                     bool constrained, const FloatObserver& observer) {
  validate_config(cfg, s.n);
  if (constrained && slack.size() != s.p) {
    throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  }
  const FloatProblem prob(s);
  const std::size_t batch = cfg.batch();
  const auto order = minibatch_order(s.n, cfg.seed);
  std::vector<double> theta(s.d, 0.0), lambda(s.p, 0.0);
  std::size_t update = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double kb = cfg.eta_theta * xi_bce(cfg.epochs, epoch);
    const double kc = cfg.eta_theta * xi_con(cfg.epochs, epoch);
    for (std::size_t mb = 0; mb < s.n / batch; ++mb) {
      const std::span<const std::size_t> rows(order.data() + mb * batch, batch);
      const auto g_bce = prob.bce_gradient(rows, theta, kind);
      std::vector<double> g_con(s.d, 0.0);
      std::vector<double> grad_lambda(s.p, 0.0);
      if (constrained) {
        for (std::size_t k = 0; k < s.p; ++k) {
          const double u = prob.a_dot(k, theta);
          const double w = u < 0 ? -1.0 : 1.0;
          const double big_f = w * u - slack[k];
          if (big_f > 0) {
            grad_lambda[k] = big_f;
            for (std::size_t j = 0; j < s.d; ++j) g_con[j] += prob.a[k * s.d + j] * w * lambda[k];
          }
        }
      }
      for (std::size_t j = 0; j < s.d; ++j) theta[j] -= kb * g_bce[j] + kc * g_con[j];
      for (std::size_t k = 0; k < s.p; ++k) {
        lambda[k] = std::max(lambda[k] + cfg.eta_lambda * grad_lambda[k], 0.0);
      }
      ++update;
      if (observer) observer(update, theta, lambda);
    }
  }
  return theta;
}

struct ChebyshevTable {
  std::array<double, 10> slope{}, offset{};
  double low = 0, high = 0;

  ChebyshevTable() {
    constexpr int kSamples = 1001;
    for (int k = 0; k < 10; ++k) {
      const double a = -5.0 + k;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < kSamples; ++i) {
        const double x = a + static_cast<double>(i) / (kSamples - 1);
        const double y = sigmoid_logistic(x);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double n = kSamples;
      slope[k] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      offset[k] = (sy - slope[k] * sx) / n;
    }
    low = slope[0] * -5.0 + offset[0];
    high = slope[9] * 5.0 + offset[9];
  }
};

MetricsReport nan_report() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan, nan, nan};
}

}  // namespace

const char* arithmetic_name(Arithmetic a) {
  return a == Arithmetic::kFloat ? "float" : "fixed";
}

double sigmoid_piecewise(double v) {
  if (v < -0.5) return 0.0;
  if (v >= 0.5) return 1.0;
  return v + 0.5;
}

double sigmoid_logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double sigmoid_chebyshev(double v) {
  static const ChebyshevTable table;
  if (v < -5.0) return table.low;
  if (v >= 5.0) return table.high;
  const int k = std::min(9, static_cast<int>(std::floor(v + 5.0)));
  return table.slope[k] * v + table.offset[k];
}

double sigmoid(SigmoidKind kind, double v) {
  switch (kind) {
    case SigmoidKind::kPiecewise: return sigmoid_piecewise(v);
    case SigmoidKind::kLogistic: return sigmoid_logistic(v);
    case SigmoidKind::kChebyshev: return sigmoid_chebyshev(v);
  }
  return sigmoid_piecewise(v);
}

std::vector<double> constraint_matrix(const Split& s) {
  std::vector<double> mean(s.p, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t k = 0; k < s.p; ++k) mean[k] += s.z_at(i, k);
  }
  for (auto& m : mean) m /= static_cast<double>(s.n);
  std::vector<double> a(s.p * s.d, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t k = 0; k < s.p; ++k) {
      const double zc = s.z_at(i, k) - mean[k];
      for (std::size_t j = 0; j < s.d; ++j) a[k * s.d + j] += zc * s.x_at(i, j);
    }
  }
  for (auto& v : a) v /= static_cast<double>(s.n);
  return a;
}

RingMatrix constraint_matrix_fixed(const Split& s, const TrainConfig& cfg, int frac_bits) {
  const std::size_t n = s.n;
  if (!is_pow2(n) || n < 2) throw Error(ErrorCode::kBadShape, "n must be a power of two >= 2");
  const RingMatrix x = encode_features(s, frac_bits);
  RingMatrix zc = encode_sensitive(s, frac_bits);
  RingMatrix sums(1, s.p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < s.p; ++k) sums(0, k) += zc(i, k);
  }
  const RingMatrix mean = round_shift(sums, log2_exact(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < s.p; ++k) zc(i, k) -= mean(0, k);
  }
  const std::size_t b = std::min(cfg.block, n);
  if (!is_pow2(b) || !is_pow2(n / b)) throw Error(ErrorCode::kBadBlockSize, "bad block size");
  const std::size_t blocks = n / b;
  RingMatrix sum(s.p, s.d);
  for (std::size_t k = 0; k < blocks; ++k) {
    const RingMatrix prod = matmul(zc.row_block(k * b, b).transposed(), x.row_block(k * b, b));
    sum += round_shift(prod, frac_bits + log2_exact(b));
  }
  return blocks > 1 ? round_shift(sum, log2_exact(blocks)) : sum;
}

std::vector<Ring> train_lagrangian_fixed(const Split& s, std::span<const double> slack,
                                         const TrainConfig& cfg, int frac_bits,
                                         const FixedObserver& observer) {
  validate_config(cfg, s.n);
  if (slack.size() != s.p) throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  const int f = frac_bits;
  const RingMatrix x = encode_features(s, f);
  const RingMatrix y = encode_labels(s, f);
  const RingMatrix c = encode_slack(slack, f);
  const RingMatrix a = constraint_matrix_fixed(s, cfg, f);
  const RingMatrix at = a.transposed();
  const Ring half = Ring{1} << (f - 1);
  const Ring k_lambda = lambda_rate(cfg, f);
  const std::size_t batch = cfg.batch();
  const auto order = minibatch_order(s.n, cfg.seed);

  RingMatrix theta(s.d, 1), lambda(s.p, 1);
  std::size_t update = 0;
  auto ring_mul = [](Ring p, Ring q) { return p * q; };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const StepConstants k = step_constants(cfg, epoch);
    for (std::size_t mb = 0; mb < s.n / batch; ++mb) {
      const std::span<const std::size_t> rows(order.data() + mb * batch, batch);
      const RingMatrix xi = x.gather_rows(rows);
      const RingMatrix yi = y.gather_rows(rows);

      const RingMatrix u = round_shift(matmul(a, theta), f);
      const RingMatrix v = round_shift(matmul(xi, theta), f);
      const RingMatrix w = map(u, [](Ring e) { return Ring{1} - 2 * msb(e); });
      const RingMatrix abs_u = zip(w, u, ring_mul);
      const RingMatrix sigma = map(v, [half](Ring e) {
        const Ring up = e + half, lo = e - half;
        return (Ring{1} - msb(up)) * up + (Ring{1} - msb(lo)) * (Ring{0} - lo);
      });

      const RingMatrix big_f = abs_u - c;
      const RingMatrix act = map(big_f, [](Ring e) { return msb(Ring{0} - e); });
      const RingMatrix grad_lambda = zip(act, big_f, ring_mul);
      const RingMatrix signed_lambda = zip(w, zip(act, lambda, ring_mul), ring_mul);

      const RingMatrix g_bce = round_shift(matmul(xi.transposed(), sigma - yi), f + cfg.batch_log2);
      const RingMatrix g_con = round_shift(matmul(at, signed_lambda), f);
      const RingMatrix d_lambda = round_shift(scale(grad_lambda, k_lambda), f);

      theta -= round_shift(scale(g_bce, k.k_bce) + scale(g_con, k.k_con), kStepFracBits);
      const RingMatrix lambda_next = lambda + d_lambda;
      lambda = map(lambda_next, [](Ring e) { return (Ring{1} - msb(e)) * e; });

      ++update;
      if (observer) observer(update, theta.values(), lambda.values());
    }
  }
  for (Ring v : theta.data()) {
    if (!in_range(v, f)) throw Error(ErrorCode::kOverflow, "fixed-point model left the range");
  }
  return theta.data();
}

std::vector<double> train_lagrangian_float(const Split& s, std::span<const double> slack,
                                           const TrainConfig& cfg, SigmoidKind sigmoid,
                                           const FloatObserver& observer) {
  return lagrangian_float(s, slack, cfg, sigmoid, true, observer);
}

std::vector<double> train_lagrangian(const Split& s, std::span<const double> slack,
                                     const TrainConfig& cfg, Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::kFloat) return train_lagrangian_float(s, slack, cfg);
  const auto raw = train_lagrangian_fixed(s, slack, cfg);
  std::vector<double> out;
  for (Ring v : raw) out.push_back(decode_raw(v));
  return out;
}

std::vector<double> train_unconstrained(const Split& s, const TrainConfig& cfg,
                                        SigmoidKind sigmoid) {
  return lagrangian_float(s, {}, cfg, sigmoid, false, {});
}

std::vector<double> project_gradient(std::span<const double> rows, std::size_t d,
                                     std::span<const double> g, std::size_t* fallbacks) {
  const std::size_t k = rows.size() / d;
  Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(d));
  if (k == 0) return {g.begin(), g.end()};
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      rows.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd gram = m * m.transpose();
  const Eigen::VectorXd rhs = m * grad;
  Eigen::VectorXd coef;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-10);
  if (lu.isInvertible()) {
    coef = lu.solve(rhs);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    cod.setThreshold(1e-10);
    coef = cod.pseudoInverse() * rhs;
    if (fallbacks != nullptr) ++*fallbacks;
  }
  const Eigen::VectorXd out = grad - m.transpose() * coef;
  return {out.data(), out.data() + out.size()};
}

ProjectedResult train_projected(const Split& s, std::span<const double> slack,
                                const TrainConfig& cfg) {
  validate_config(cfg, s.n);
  if (slack.size() != s.p) throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  const FloatProblem prob(s);
  const std::size_t batch = cfg.batch();
  const auto order = minibatch_order(s.n, cfg.seed);
  ProjectedResult result;
  result.theta.assign(s.d, 0.0);
  auto& theta = result.theta;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t mb = 0; mb < s.n / batch; ++mb) {
      const std::span<const std::size_t> rows(order.data() + mb * batch, batch);
      const auto g = prob.bce_gradient(rows, theta, SigmoidKind::kPiecewise);
      std::vector<double> active;
      for (std::size_t k = 0; k < s.p; ++k) {
        if (std::abs(prob.a_dot(k, theta)) - slack[k] > 0) {
          active.insert(active.end(), prob.a.begin() + k * s.d, prob.a.begin() + (k + 1) * s.d);
        }
      }
      const auto step = project_gradient(active, s.d, g, &result.fallbacks);
      for (std::size_t j = 0; j < s.d; ++j) theta[j] -= cfg.eta_theta * step[j];
    }
  }
  return result;
}

double barrier_value(std::span<const double> a, std::size_t d, std::span<const double> slack,
                     std::span<const double> theta, double t) {
  double acc = 0;
  for (std::size_t k = 0; k < slack.size(); ++k) {
    double u = 0;
    for (std::size_t j = 0; j < d; ++j) u += a[k * d + j] * theta[j];
    const double lo = slack[k] + u, hi = slack[k] - u;
    if (!(lo > 0) || !(hi > 0)) throw Error(ErrorCode::kInfeasibleIterate, "barrier argument <= 0");
    acc += std::log(lo) + std::log(hi);
  }
  return -acc / t;
}

std::vector<double> barrier_gradient(std::span<const double> a, std::size_t d,
                                     std::span<const double> slack,
                                     std::span<const double> theta, double t) {
  std::vector<double> g(d, 0.0);
  for (std::size_t k = 0; k < slack.size(); ++k) {
    double u = 0;
    for (std::size_t j = 0; j < d; ++j) u += a[k * d + j] * theta[j];
    const double lo = slack[k] + u, hi = slack[k] - u;
    if (!(lo > 0) || !(hi > 0)) throw Error(ErrorCode::kInfeasibleIterate, "barrier argument <= 0");
    const double coef = (1.0 / hi - 1.0 / lo) / t;
    for (std::size_t j = 0; j < d; ++j) g[j] += coef * a[k * d + j];
  }
  return g;
}

std::vector<double> train_iplb(const Split& s, std::span<const double> slack,
                               const TrainConfig& cfg, BarrierSchedule schedule) {
  validate_config(cfg, s.n);
  if (slack.size() != s.p) throw Error(ErrorCode::kShapeMismatch, "one slack per sensitive attribute");
  const FloatProblem prob(s);
  const std::size_t batch = cfg.batch();
  const auto order = minibatch_order(s.n, cfg.seed);
  std::vector<double> theta(s.d, 0.0);
  double t = schedule.t0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t mb = 0; mb < s.n / batch; ++mb) {
      const std::span<const std::size_t> rows(order.data() + mb * batch, batch);
      const auto g = prob.bce_gradient(rows, theta, SigmoidKind::kPiecewise);
      const auto gb = barrier_gradient(prob.a, s.d, slack, theta, t);
      for (std::size_t j = 0; j < s.d; ++j) theta[j] -= cfg.eta_theta * (g[j] + gb[j]);
      // Validates the new iterate.
      barrier_value(prob.a, s.d, slack, theta, t);
    }
    t *= schedule.growth;
  }
  return theta;
}

double p_rule(double rate0, double rate1) {
  if (rate0 == 0 && rate1 == 0) return 100.0;
  if (rate0 == 0 || rate1 == 0) return 0.0;
  return 100.0 * std::min(rate0 / rate1, rate1 / rate0);
}

MetricsReport evaluate(std::span<const double> theta, const Split& s,
                       std::span<const double> slack) {
  MetricsReport r;
  std::size_t correct = 0, n0 = 0, n1 = 0, pos0 = 0, pos1 = 0;
  for (std::size_t i = 0; i < s.n; ++i) {
    double score = 0;
    for (std::size_t j = 0; j < s.d; ++j) score += s.x_at(i, j) * theta[j];
    const bool positive = score >= 0;
    correct += positive == (s.y[i] == 1.0);
    if (s.p > 0 && s.z_at(i, 0) == 1.0) {
      ++n1;
      pos1 += positive;
    } else {
      ++n0;
      pos0 += positive;
    }
  }
  r.accuracy = s.n ? static_cast<double>(correct) / static_cast<double>(s.n) : 0.0;
  r.frac_pos_z0 = n0 ? static_cast<double>(pos0) / static_cast<double>(n0) : 0.0;
  r.frac_pos_z1 = n1 ? static_cast<double>(pos1) / static_cast<double>(n1) : 0.0;
  r.p_percent = p_rule(r.frac_pos_z0, r.frac_pos_z1);
  r.constraint_max = -std::numeric_limits<double>::infinity();
  if (s.p > 0 && s.n > 0) {
    const auto a = constraint_matrix(s);
    for (std::size_t k = 0; k < s.p; ++k) {
      double u = 0;
      for (std::size_t j = 0; j < s.d; ++j) u += a[k * s.d + j] * theta[j];
      const double c = k < slack.size() ? slack[k] : 0.0;
      r.constraint_max = std::max(r.constraint_max, std::abs(u) - c);
    }
  }
  return r;
}

std::vector<double> slack_grid(std::size_t points, double lo, double hi) {
  std::vector<double> grid;
  if (points == 1) return {hi};
  const double a = std::log10(hi), b = std::log10(lo);
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                          static_cast<double>(points - 1)));
  }
  return grid;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kLagrangian: return "lagrangian";
    case Method::kProjected: return "projected";
    case Method::kIplb: return "iplb";
    case Method::kUnconstrained: return "unconstrained";
    case Method::kMpc: return "mpc";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kLagrangian, Method::kProjected, Method::kIplb,
                   Method::kUnconstrained, Method::kMpc}) {
    if (name == method_name(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
}

std::vector<SweepRow> run_sweep(const Dataset& data, std::span<const double> grid,
                                std::span<const Method> methods, const TrainConfig& cfg,
                                unsigned threads) {
  std::vector<SweepRow> rows;
  for (double c : grid) {
    for (Method m : methods) {
      if (m == Method::kMpc) {
        throw Error(ErrorCode::kInvalidArgument, "the plaintext sweep cannot run mpc");
      }
      rows.push_back({c, m, Arithmetic::kFloat, {}});
      if (m == Method::kLagrangian) rows.push_back({c, m, Arithmetic::kFixed, {}});
    }
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      const std::vector<double> slack(data.train.p, row.c);
      try {
        std::vector<double> theta;
        switch (row.method) {
          case Method::kLagrangian:
            theta = train_lagrangian(data.train, slack, cfg, row.arithmetic);
            break;
          case Method::kProjected: theta = train_projected(data.train, slack, cfg).theta; break;
          case Method::kIplb: theta = train_iplb(data.train, slack, cfg); break;
          case Method::kUnconstrained: theta = train_unconstrained(data.train, cfg); break;
          case Method::kMpc: break;
        }
        row.metrics = evaluate(theta, data.test, slack);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInfeasibleIterate || e.code() == ErrorCode::kOverflow) {
          row.metrics = nan_report();
          continue;
        }
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = rows.size();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = rows.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "c,method,arithmetic,accuracy,frac_pos_z0,frac_pos_z1,p_percent,constraint_max\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%s,%s,%.6f,%.6f,%.6f,%.4f,%.6g\n", r.c,
                  method_name(r.method), arithmetic_name(r.arithmetic), r.metrics.accuracy,
                  r.metrics.frac_pos_z0, r.metrics.frac_pos_z1, r.metrics.p_percent,
                  r.metrics.constraint_max);
    out << buf;
  }
}

double l2_norm(std::span<const double> v) {
  double acc = 0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc);
}

}  // namespace fairmpc
