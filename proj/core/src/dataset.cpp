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

#include "fairmpc/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fairmpc/error.hpp"

namespace fairmpc {

namespace {

// Unwhitened rows before splitting; x has `raw_d` columns and no bias.
struct RawRows {
  std::size_t n = 0, raw_d = 0, p = 0;
  std::vector<double> x, y, z;
};

std::size_t largest_pow2_at_most(std::size_t v) {
  return v == 0 ? 0 : std::bit_floor(v);
}

// Whitens with statistics of rows [0, n_train), clips, appends the bias
// column and cuts into the two splits.
Dataset finish(const RawRows& raw, std::size_t n_train) {
  const std::size_t rd = raw.raw_d, d = rd + 1, p = raw.p;
  std::vector<double> mean(rd, 0.0), sd(rd, 0.0);
  for (std::size_t i = 0; i < n_train; ++i) {
    for (std::size_t j = 0; j < rd; ++j) mean[j] += raw.x[i * rd + j];
  }
  for (auto& m : mean) m /= static_cast<double>(n_train);
  for (std::size_t i = 0; i < n_train; ++i) {
    for (std::size_t j = 0; j < rd; ++j) {
      const double c = raw.x[i * rd + j] - mean[j];
      sd[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < rd; ++j) {
    sd[j] = std::sqrt(sd[j] / static_cast<double>(n_train));
    if (!(sd[j] > 0)) {
      throw Error(ErrorCode::kZeroVariance, "feature column " + std::to_string(j) +
                                                " is constant on the training split");
    }
  }
  Dataset out;
  auto fill = [&](Split& s, std::size_t begin, std::size_t end) {
    s.n = end - begin;
    s.d = d;
    s.p = p;
    s.x.reserve(s.n * d);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < rd; ++j) {
        const double w = (raw.x[i * rd + j] - mean[j]) / sd[j];
        s.x.push_back(std::clamp(w, -kClip, kClip));
      }
      s.x.push_back(1.0);
      s.y.push_back(raw.y[i]);
      for (std::size_t k = 0; k < p; ++k) s.z.push_back(raw.z[i * p + k]);
    }
  };
  fill(out.train, 0, n_train);
  fill(out.test, n_train, raw.n);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

double parse_binary(const std::string& s, std::size_t line) {
  const double v = parse_number(s, line);
  if (v != 0.0 && v != 1.0) {
    throw Error(ErrorCode::kNonBinaryLabel,
                "line " + std::to_string(line) + ": expected 0 or 1, got '" + s + "'");
  }
  return v;
}

void write_split_rows(std::FILE* f, const char* tag, const Split& s) {
  for (std::size_t i = 0; i < s.n; ++i) {
    std::fprintf(f, "%s", tag);
    for (std::size_t j = 0; j < s.d; ++j) std::fprintf(f, ",%.17g", s.x_at(i, j));
    std::fprintf(f, ",%.17g", s.y[i]);
    for (std::size_t k = 0; k < s.p; ++k) std::fprintf(f, ",%.17g", s.z_at(i, k));
    std::fprintf(f, "\n");
  }
}

}  // namespace

Dataset synth(std::size_t n, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw Error(ErrorCode::kBadCorrelation, "correlation must lie in [0, 1]");
  }
  if (n < 4 || (n & (n - 1)) != 0) throw Error(ErrorCode::kBadShape, "n must be a power of two >= 4");

  // Cholesky factor of [[5, 1], [1, 5]].
  const double l11 = std::sqrt(5.0), l21 = 1.0 / std::sqrt(5.0), l22 = std::sqrt(4.8);
  // Inverse covariance, for the class posterior.
  const double det = 24.0;
  const double i11 = 5.0 / det, i12 = -1.0 / det, i22 = 5.0 / det;
  const double phi = (1.0 - rho) * std::numbers::pi / 2.0;
  const double cs = std::cos(phi), sn = std::sin(phi);

  Prg rng(seed);
  std::normal_distribution<double> normal;
  RawRows raw;
  raw.n = n + n / 4;
  raw.raw_d = 2;
  raw.p = 1;
  for (std::size_t i = 0; i < raw.n; ++i) {
    const bool positive = rng.next_unit() < 0.5;
    const double mu = positive ? 2.0 : -2.0;
    const double g1 = normal(rng), g2 = normal(rng);
    const double x1 = mu + l11 * g1;
    const double x2 = mu + l21 * g1 + l22 * g2;
    // Rotated point and its log-odds of the positive class. With equal
    // priors and shared covariance the log-odds are 2 * mu^T Sigma^-1 x.
    const double r1 = cs * x1 - sn * x2;
    const double r2 = sn * x1 + cs * x2;
    const double log_odds = 2.0 * 2.0 * ((i11 + i12) * r1 + (i12 + i22) * r2);
    const double posterior = 1.0 / (1.0 + std::exp(-log_odds));
    const bool z = rng.next_unit() < posterior;
    raw.x.push_back(x1);
    raw.x.push_back(x2);
    raw.y.push_back(positive ? 1.0 : 0.0);
    raw.z.push_back(z ? 1.0 : 0.0);
  }
  return finish(raw, n);
}

Dataset load_csv(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || split_fields(line).empty()) {
    throw Error(ErrorCode::kEmptyFile, path.string() + " has no header");
  }
  const auto header = split_fields(line);
  std::vector<std::size_t> xcols, zcols;
  std::size_t ycol = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h == "y") {
      if (ycol != header.size()) throw Error(ErrorCode::kParseError, "duplicate y column");
      ycol = c;
    } else if (!h.empty() && h[0] == 'x') {
      xcols.push_back(c);
    } else if (!h.empty() && h[0] == 'z') {
      zcols.push_back(c);
    } else {
      throw Error(ErrorCode::kParseError, "unknown column '" + h + "'");
    }
  }
  if (ycol == header.size() || xcols.empty() || zcols.empty()) {
    throw Error(ErrorCode::kParseError, "header needs x*, y and z* columns");
  }

  RawRows raw;
  raw.raw_d = xcols.size();
  raw.p = zcols.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields");
    }
    for (auto c : xcols) raw.x.push_back(parse_number(fields[c], line_no));
    raw.y.push_back(parse_binary(fields[ycol], line_no));
    for (auto c : zcols) raw.z.push_back(parse_binary(fields[c], line_no));
    ++raw.n;
  }
  if (raw.n == 0) throw Error(ErrorCode::kEmptyFile, path.string() + " has no data rows");

  std::vector<std::size_t> order(raw.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffler(seed);
  std::shuffle(order.begin(), order.end(), shuffler);
  RawRows shuffled;
  shuffled.n = raw.n;
  shuffled.raw_d = raw.raw_d;
  shuffled.p = raw.p;
  for (auto i : order) {
    for (std::size_t j = 0; j < raw.raw_d; ++j) shuffled.x.push_back(raw.x[i * raw.raw_d + j]);
    shuffled.y.push_back(raw.y[i]);
    for (std::size_t k = 0; k < raw.p; ++k) shuffled.z.push_back(raw.z[i * raw.p + k]);
  }
  const std::size_t eighty = std::max<std::size_t>(1, raw.n * 4 / 5);
  return finish(shuffled, largest_pow2_at_most(eighty));
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (f == nullptr) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const Split& t = data.train;
  std::fprintf(f, "split");
  for (std::size_t j = 0; j < t.d; ++j) std::fprintf(f, ",x%zu", j);
  std::fprintf(f, ",y");
  for (std::size_t k = 0; k < t.p; ++k) std::fprintf(f, ",z%zu", k);
  std::fprintf(f, "\n");
  write_split_rows(f, "train", data.train);
  write_split_rows(f, "test", data.test);
  if (std::fclose(f) != 0) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kEmptyFile, path.string() + " is empty");
  const auto header = split_fields(line);
  if (header.empty() || header[0] != "split") {
    throw Error(ErrorCode::kParseError, "processed dataset must start with a split column");
  }
  std::size_t d = 0, p = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c][0] == 'x') ++d;
    else if (header[c][0] == 'z') ++p;
  }
  if (header.size() != 1 + d + 1 + p) throw Error(ErrorCode::kParseError, "bad processed header");
  Dataset out;
  out.train.d = out.test.d = d;
  out.train.p = out.test.p = p;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": wrong field count");
    }
    Split* s = fields[0] == "train" ? &out.train : fields[0] == "test" ? &out.test : nullptr;
    if (s == nullptr) throw Error(ErrorCode::kParseError, "unknown split '" + fields[0] + "'");
    for (std::size_t j = 0; j < d; ++j) s->x.push_back(parse_number(fields[1 + j], line_no));
    s->y.push_back(parse_binary(fields[1 + d], line_no));
    for (std::size_t k = 0; k < p; ++k) s->z.push_back(parse_binary(fields[2 + d + k], line_no));
    ++s->n;
  }
  return out;
}

RingMatrix encode_features(const Split& s, int frac_bits) {
  return encode_matrix(s.n, s.d, s.x, frac_bits);
}

RingMatrix encode_labels(const Split& s, int frac_bits) {
  return encode_matrix(s.n, 1, s.y, frac_bits);
}

RingMatrix encode_sensitive(const Split& s, int frac_bits) {
  return encode_matrix(s.n, s.p, s.z, frac_bits);
}

std::pair<Share, Share> user_split(std::span<const double> z_row, Prg& rng, int frac_bits) {
  for (double v : z_row) {
    if (v != 0.0 && v != 1.0) throw Error(ErrorCode::kNonBinaryLabel, "sensitive values must be 0 or 1");
  }
  return split(encode_matrix(1, z_row.size(), z_row, frac_bits), rng);
}

std::pair<Share, Share> share_sensitive(const Split& s, Prg& rng, int frac_bits) {
  Share m{Party::kModeler, RingMatrix(s.n, s.p)};
  Share r{Party::kRegulator, RingMatrix(s.n, s.p)};
  for (std::size_t i = 0; i < s.n; ++i) {
    auto [a, b] = user_split(std::span<const double>(s.z).subspan(i * s.p, s.p), rng, frac_bits);
    for (std::size_t k = 0; k < s.p; ++k) {
      m.values(i, k) = a.values[k];
      r.values(i, k) = b.values[k];
    }
  }
  return {std::move(m), std::move(r)};
}

}  // namespace fairmpc
