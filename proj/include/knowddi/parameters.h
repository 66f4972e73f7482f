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

#ifndef KNOWDDI_PARAMETERS_H_
#define KNOWDDI_PARAMETERS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knowddi/autodiff.h"
#include "knowddi/tensor.h"

namespace knowddi {

// Ordered collection of named tensors. Order is insertion order and defines
// the checkpoint layout.
class ParameterSet {
 public:
  size_t Add(std::string name, Tensor value);
  std::optional<size_t> Find(std::string_view name) const;
  size_t IndexOf(std::string_view name) const;  // throws if missing

  size_t size() const { return names_.size(); }
  const std::string& name(size_t i) const { return names_[i]; }
  const Tensor& value(size_t i) const { return values_[i]; }
  Tensor& value(size_t i) { return values_[i]; }
  const Tensor& at(std::string_view name) const { return values_[IndexOf(name)]; }
  Tensor& at(std::string_view name) { return values_[IndexOf(name)]; }

  // Same names and shapes, all zeros.
  ParameterSet ZerosLike() const;
  void SetZero();
  // this += other; layouts must match.
  void AddInPlace(const ParameterSet& other);
  size_t TotalSize() const;
  bool AllFinite() const;

  bool operator==(const ParameterSet& other) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
};

// Lazily binds parameters to a tape as tracked leaves, so a forward pass only
// copies the tensors it touches.
class ParameterBinding {
 public:
  ParameterBinding(Tape& tape, const ParameterSet& params)
      : tape_(&tape), params_(&params), vars_(params.size()) {}

  Var Get(size_t index);
  Var Get(std::string_view name) { return Get(params_->IndexOf(name)); }

  // Adds the gradients collected on the tape into `grads`.
  void AccumulateGrads(ParameterSet& grads) const;
  // (parameter index, gradient) for every bound parameter that received one.
  std::vector<std::pair<size_t, Tensor>> CollectGrads() const;

 private:
  Tape* tape_;
  const ParameterSet* params_;
  std::vector<std::optional<Var>> vars_;
};

Tensor UniformTensor(size_t rows, size_t cols, double bound, std::mt19937_64& rng);
// Glorot/Xavier uniform for a fan_in x fan_out weight.
Tensor GlorotTensor(size_t fan_in, size_t fan_out, std::mt19937_64& rng);

}  // namespace knowddi

#endif  // KNOWDDI_PARAMETERS_H_
