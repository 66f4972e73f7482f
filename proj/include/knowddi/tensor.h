/*
 * Copyright 2026 The KnowDDI Authors.
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

#ifndef KNOWDDI_TENSOR_H_
#define KNOWDDI_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace knowddi {

// Dense row-major matrix of doubles. Vectors are 1 x n, scalars 1 x 1.
class Tensor {
 public:
  Tensor() = default;
  Tensor(size_t rows, size_t cols, double fill = 0.0);
  Tensor(size_t rows, size_t cols, std::vector<double> values);

  static Tensor Scalar(double value) { return Tensor(1, 1, value); }
  static Tensor Zeros(size_t rows, size_t cols) { return Tensor(rows, cols); }
  static Tensor ZerosLike(const Tensor& other) {
    return Tensor(other.rows_, other.cols_);
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::vector<size_t> shape() const { return {rows_, cols_}; }
  bool SameShape(const Tensor& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double operator()(size_t r, size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(size_t r, size_t c) { return values_[r * cols_ + c]; }
  double operator[](size_t i) const { return values_[i]; }
  double& operator[](size_t i) { return values_[i]; }

  std::span<const double> row(size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Value of a 1 x 1 tensor.
  double item() const;
  void Fill(double value);
  // this += other (same shape).
  void AddInPlace(const Tensor& other);
  bool AllFinite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace knowddi

#endif  // KNOWDDI_TENSOR_H_
