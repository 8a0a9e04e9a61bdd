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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairmpc/fixed_point.hpp"

namespace fairmpc {

// Dense row-major matrix over Z_{2^64}. All arithmetic wraps.
class RingMatrix {
 public:
  RingMatrix() = default;
  RingMatrix(std::size_t rows, std::size_t cols, Ring fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Throws kShapeMismatch unless rows * cols == data.size().
  RingMatrix(std::size_t rows, std::size_t cols, std::vector<Ring> data);

  static RingMatrix column(std::vector<Ring> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const RingMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Ring& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Ring operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  Ring& operator[](std::size_t i) { return data_[i]; }
  Ring operator[](std::size_t i) const { return data_[i]; }

  std::span<Ring> values() { return data_; }
  std::span<const Ring> values() const { return data_; }
  const std::vector<Ring>& data() const { return data_; }

  RingMatrix transposed() const;
  // Rows [begin, begin + count).
  RingMatrix row_block(std::size_t begin, std::size_t count) const;
  // Rows picked by index, in the given order.
  RingMatrix gather_rows(std::span<const std::size_t> index) const;

  RingMatrix& operator+=(const RingMatrix& other);
  RingMatrix& operator-=(const RingMatrix& other);

  friend RingMatrix operator+(RingMatrix a, const RingMatrix& b) { return a += b; }
  friend RingMatrix operator-(RingMatrix a, const RingMatrix& b) { return a -= b; }
  friend RingMatrix operator-(RingMatrix a);
  friend bool operator==(const RingMatrix&, const RingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Ring> data_;
};

// Exact ring product (m x k) * (k x l).
RingMatrix matmul(const RingMatrix& a, const RingMatrix& b);
// Elementwise product of equally shaped matrices.
RingMatrix hadamard(const RingMatrix& a, const RingMatrix& b);
RingMatrix scale(const RingMatrix& a, Ring k);
// Stacks matrices with equal column counts on top of each other.
RingMatrix vstack(std::span<const RingMatrix> parts);

RingMatrix encode_matrix(std::size_t rows, std::size_t cols,
                         std::span<const double> values,
                         int frac_bits = kDefaultFracBits);
std::vector<double> decode_values(const RingMatrix& m,
                                  int frac_bits = kDefaultFracBits);

}  // namespace fairmpc
