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

#ifndef KNOWDDI_AUTODIFF_H_
#define KNOWDDI_AUTODIFF_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "knowddi/tensor.h"

namespace knowddi {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
// owning tape is alive.
class Var {
 public:
  Var() = default;

  Tape* tape() const { return tape_; }
  size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;
  // Empty tensor when no gradient reached this node.
  const Tensor& grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  size_t id_ = 0;
};

// Records primitive applications in execution order and replays them in
// reverse to accumulate gradients. Confined to one thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape& tape, const Tensor& out_value,
                                        const Tensor& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Untracked input.
  Var Constant(Tensor value);
  // Tracked leaf; receives a gradient on Backward.
  Var Variable(Tensor value);

  // Seeds d(loss)/d(loss) = 1. `loss` must be 1 x 1.
  void Backward(Var loss);
  // Seeds the output gradient explicitly (vector-Jacobian product).
  void Backward(Var output, const Tensor& seed);

  const Tensor& value(size_t id) const { return nodes_[id].value; }
  const Tensor& grad(size_t id) const { return nodes_[id].grad; }
  bool requires_grad(size_t id) const { return nodes_[id].requires_grad; }
  size_t size() const { return nodes_.size(); }

  // Used by primitives. `inputs` decides whether the result is tracked;
  // `backward` is dropped for untracked results.
  Var Record(Tensor value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(Tensor value, std::span<const Var> inputs, BackwardFn backward);
  // Gradient buffer of a tracked node, allocated on first use. Returns
  // nullptr for untracked nodes.
  Tensor* GradBuffer(size_t id);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  void CheckOwned(Var v) const;

  std::vector<Node> nodes_;
};

// ---- Primitives ------------------------------------------------------------
// Binary elementwise ops accept either equal shapes or a 1 x cols right
// operand broadcast over rows.

Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double factor);
Var AddScalar(Var a, double offset);
// Subgradient at 0 is 0.
Var Relu(Var x);
Var Exp(Var x);
Var Sigmoid(Var x);
// log(max(x, floor)). The gradient is zero where the floor is active.
// With floor == 0 any non-positive input raises NumericalError.
Var Log(Var x, double floor = 0.0);
// exp(-|a - b|) elementwise; shapes must match.
Var NegAbsDiff(Var a, Var b);
Var ConcatCols(std::span<const Var> parts);
Var ConcatRows(std::span<const Var> parts);
// 1 x cols mean over rows. An input with zero rows yields zeros.
Var MeanRows(Var x);
// 1 x 1 sum of all entries.
Var Sum(Var x);
// Softmax over the flattened entries of `scores`, normalised independently
// within each group. groups[i] < num_groups for every entry.
Var GroupedSoftmax(Var scores, std::span<const uint32_t> groups,
                   size_t num_groups);
Var SoftmaxRows(Var x);
Var GatherRows(Var x, std::span<const uint32_t> indices);
// out[dst[i]] = mean over i of x[src[i]]; rows with no entries are zero.
Var ScatterMean(Var x, std::span<const uint32_t> src,
                std::span<const uint32_t> dst, size_t num_rows);
// out[dst[i]] += w[i] * x[src[i]]; w is m x 1.
Var WeightedScatterSum(Var weights, Var x, std::span<const uint32_t> src,
                       std::span<const uint32_t> dst, size_t num_rows);
// Inverted dropout: zeroes entries with probability `rate` and rescales the
// survivors by 1 / (1 - rate).
Var Dropout(Var x, double rate, std::mt19937_64& rng);

// ---- Gradient checking -----------------------------------------------------

using ScalarFn = std::function<Var(Tape& tape, std::span<const Var> inputs)>;

// Max over all input coordinates of
//   |analytic - central difference| / max(1, |analytic|).
double FiniteDiffCheck(const ScalarFn& fn, const std::vector<Tensor>& inputs,
                       double eps = 1e-5);

}  // namespace knowddi

#endif  // KNOWDDI_AUTODIFF_H_
