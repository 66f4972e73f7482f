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

#include "knowddi/parameters.h"

#include <cmath>
#include <utility>

#include "knowddi/errors.h"

namespace knowddi {

size_t ParameterSet::Add(std::string name, Tensor value) {
  if (Find(name)) throw ShapeError("duplicate parameter name: " + name);
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return names_.size() - 1;
}

std::optional<size_t> ParameterSet::Find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

size_t ParameterSet::IndexOf(std::string_view name) const {
  if (auto i = Find(name)) return *i;
  throw ShapeError("unknown parameter: " + std::string(name));
}

ParameterSet ParameterSet::ZerosLike() const {
  ParameterSet out;
  out.names_ = names_;
  out.values_.reserve(values_.size());
  for (const Tensor& v : values_) out.values_.push_back(Tensor::ZerosLike(v));
  return out;
}

void ParameterSet::SetZero() {
  for (Tensor& v : values_) v.Fill(0.0);
}

void ParameterSet::AddInPlace(const ParameterSet& other) {
  if (other.size() != size()) throw ShapeError("ParameterSet layout mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i].AddInPlace(other.values_[i]);
}

size_t ParameterSet::TotalSize() const {
  size_t n = 0;
  for (const Tensor& v : values_) n += v.size();
  return n;
}

bool ParameterSet::AllFinite() const {
  for (const Tensor& v : values_) {
    if (!v.AllFinite()) return false;
  }
  return true;
}

Var ParameterBinding::Get(size_t index) {
  if (!vars_[index]) vars_[index] = tape_->Variable(params_->value(index));
  return *vars_[index];
}

void ParameterBinding::AccumulateGrads(ParameterSet& grads) const {
  for (size_t i = 0; i < vars_.size(); ++i) {
    if (!vars_[i]) continue;
    const Tensor& g = vars_[i]->grad();
    if (!g.empty()) grads.value(i).AddInPlace(g);
  }
}

std::vector<std::pair<size_t, Tensor>> ParameterBinding::CollectGrads() const {
  std::vector<std::pair<size_t, Tensor>> out;
  for (size_t i = 0; i < vars_.size(); ++i) {
    if (!vars_[i]) continue;
    const Tensor& g = vars_[i]->grad();
    if (!g.empty()) out.emplace_back(i, g);
  }
  return out;
}

Tensor UniformTensor(size_t rows, size_t cols, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t(rows, cols);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

Tensor GlorotTensor(size_t fan_in, size_t fan_out, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return UniformTensor(fan_in, fan_out, bound, rng);
}

}  // namespace knowddi
