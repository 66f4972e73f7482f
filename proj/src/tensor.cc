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

#include "knowddi/tensor.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "knowddi/errors.h"

namespace knowddi {

Tensor::Tensor(size_t rows, size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Tensor::Tensor(size_t rows, size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    std::ostringstream msg;
    msg << "Tensor: " << values_.size() << " values do not fill a " << rows
        << "x" << cols << " shape";
    throw ShapeError(msg.str());
  }
}

double Tensor::item() const {
  if (values_.size() != 1) {
    throw ShapeError("Tensor::item() requires a 1x1 tensor");
  }
  return values_[0];
}

void Tensor::Fill(double value) {
  for (double& v : values_) v = value;
}

void Tensor::AddInPlace(const Tensor& other) {
  if (!SameShape(other)) throw ShapeError("Tensor::AddInPlace shape mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
}

bool Tensor::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace knowddi
