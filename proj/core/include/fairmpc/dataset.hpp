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

// Training data: CSV ingestion, whitening, power-of-two subsampling, the
// synthetic generator, and user-side sharing of sensitive attributes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "fairmpc/prg.hpp"
#include "fairmpc/ring_matrix.hpp"
#include "fairmpc/share.hpp"

namespace fairmpc {

// Whitened features are clipped to [-kClip, kClip].
inline constexpr double kClip = 8.0;

// Row-major n x d features (last column is the bias, always 1), labels and
// n x p binary sensitive attributes.
struct Split {
  std::size_t n = 0, d = 0, p = 0;
  std::vector<double> x, y, z;

  double x_at(std::size_t i, std::size_t j) const { return x[i * d + j]; }
  double z_at(std::size_t i, std::size_t j) const { return z[i * p + j]; }
  friend bool operator==(const Split&, const Split&) = default;
};

struct Dataset {
  Split train, test;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Two Gaussian classes with means +-(2, 2) and covariance [[5, 1], [1, 5]];
// z is drawn from the class posterior of the features rotated by
// (1 - rho) * pi / 2, so rho = 1 makes z track y and rho = 0 makes it
// independent. n training rows (a power of two) plus n / 4 test rows.
// Throws kBadCorrelation unless rho is in [0, 1], kBadShape unless n is a
// power of two.
Dataset synth(std::size_t n, double rho, std::uint64_t seed);

// Reads a CSV with header columns x*, y and z*. Rows are shuffled with
// `seed`; the training split is the largest power of two not above 80% of
// the rows and the test split is everything else. Features are whitened
// with training statistics, clipped and extended by a bias column.
// Throws kParseError, kEmptyFile, kNonBinaryLabel or kZeroVariance.
Dataset load_csv(const std::filesystem::path& path, std::uint64_t seed);

// Processed form with a leading split column; values round-trip exactly.
void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);

// Fixed-point encodings of a split's parts.
RingMatrix encode_features(const Split& s, int frac_bits = kDefaultFracBits);
RingMatrix encode_labels(const Split& s, int frac_bits = kDefaultFracBits);
RingMatrix encode_sensitive(const Split& s, int frac_bits = kDefaultFracBits);

// A user's additive sharing of the encoded sensitive row (1 x p): one record
// for the modeler, one for the regulator.
std::pair<Share, Share> user_split(std::span<const double> z_row, Prg& rng,
                                   int frac_bits = kDefaultFracBits);
// user_split applied to every row; returns (modeler, regulator) n x p shares.
std::pair<Share, Share> share_sensitive(const Split& s, Prg& rng,
                                        int frac_bits = kDefaultFracBits);

}  // namespace fairmpc
