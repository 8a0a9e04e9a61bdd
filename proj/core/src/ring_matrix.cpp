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

#include "fairmpc/ring_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "fairmpc/error.hpp"

namespace fairmpc {
namespace {

void require_same_shape(const RingMatrix& a, const RingMatrix& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    std::ostringstream msg;
    msg << op << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows()
        << "x" << b.cols();
    throw Error(ErrorCode::kShapeMismatch, msg.str());
  }
}

}  // namespace

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols,
                       std::vector<Ring> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ * cols_ != data_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "matrix data length does not match its shape");
  }
}

RingMatrix RingMatrix::column(std::vector<Ring> data) {
  const std::size_t n = data.size();
  return RingMatrix(n, 1, std::move(data));
}

RingMatrix RingMatrix::transposed() const {
  RingMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

RingMatrix RingMatrix::row_block(std::size_t begin, std::size_t count) const {
  if (begin + count > rows_) {
    throw Error(ErrorCode::kShapeMismatch, "row block out of range");
  }
  RingMatrix out(count, cols_);
  std::copy(data_.begin() + begin * cols_,
            data_.begin() + (begin + count) * cols_, out.data_.begin());
  return out;
}

RingMatrix RingMatrix::gather_rows(std::span<const std::size_t> index) const {
  RingMatrix out(index.size(), cols_);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= rows_) {
      throw Error(ErrorCode::kShapeMismatch, "row index out of range");
    }
    std::copy(data_.begin() + index[i] * cols_,
              data_.begin() + (index[i] + 1) * cols_,
              out.data_.begin() + i * cols_);
  }
  return out;
}

RingMatrix& RingMatrix::operator+=(const RingMatrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

RingMatrix& RingMatrix::operator-=(const RingMatrix& other) {
  require_same_shape(*this, other, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

RingMatrix operator-(RingMatrix a) {
  for (auto& v : a.data_) v = Ring{0} - v;
  return a;
}

RingMatrix matmul(const RingMatrix& a, const RingMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "matmul: " << a.rows() << "x" << a.cols() << " * " << b.rows()
        << "x" << b.cols();
    throw Error(ErrorCode::kShapeMismatch, msg.str());
  }
  RingMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Ring aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RingMatrix hadamard(const RingMatrix& a, const RingMatrix& b) {
  require_same_shape(a, b, "hadamard");
  RingMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RingMatrix scale(const RingMatrix& a, Ring k) {
  RingMatrix out = a;
  for (auto& v : out.values()) v *= k;
  return out;
}

RingMatrix vstack(std::span<const RingMatrix> parts) {
  std::size_t rows = 0;
  const std::size_t cols = parts.empty() ? 0 : parts.front().cols();
  for (const auto& p : parts) {
    if (p.cols() != cols) {
      throw Error(ErrorCode::kShapeMismatch, "vstack: column counts differ");
    }
    rows += p.rows();
  }
  std::vector<Ring> data;
  data.reserve(rows * cols);
  for (const auto& p : parts) {
    data.insert(data.end(), p.data().begin(), p.data().end());
  }
  return RingMatrix(rows, cols, std::move(data));
}

RingMatrix encode_matrix(std::size_t rows, std::size_t cols,
                         std::span<const double> values, int frac_bits) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::kShapeMismatch, "encode_matrix: length mismatch");
  }
  RingMatrix out(rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = encode_raw(values[i], frac_bits);
  }
  return out;
}

std::vector<double> decode_values(const RingMatrix& m, int frac_bits) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = decode_raw(m[i], frac_bits);
  return out;
}

}  // namespace fairmpc
