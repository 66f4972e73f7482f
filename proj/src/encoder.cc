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

#include "knowddi/encoder.h"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace knowddi {

Encoder::Encoder(const CombinedNetwork& net) : num_nodes_(net.num_nodes()) {
  std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> order;
  order.reserve(net.edges().size());
  for (const FactTriplet& e : net.edges()) order.emplace_back(e.tail, e.head, e.relation);
  std::sort(order.begin(), order.end());
  src_.reserve(order.size());
  dst_.reserve(order.size());
  for (const auto& [dst, src, rel] : order) {
    src_.push_back(src);
    dst_.push_back(dst);
  }
}

std::string Encoder::AggregateName(int layer) {
  return "encoder.l" + std::to_string(layer) + ".w_agg";
}

std::string Encoder::CombineName(int layer) {
  return "encoder.l" + std::to_string(layer) + ".w_combine";
}

void Encoder::InitParams(ParameterSet& params, size_t num_nodes, size_t dim,
                         int layers, std::mt19937_64& rng) {
  params.Add(FeatureName(),
             UniformTensor(num_nodes, dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng));
  for (int l = 0; l < layers; ++l) {
    params.Add(AggregateName(l), GlorotTensor(dim, dim, rng));
    params.Add(CombineName(l), GlorotTensor(2 * dim, dim, rng));
  }
}

Var Encoder::Forward(ParameterBinding& binding, int layers, double dropout,
                     std::mt19937_64* rng) const {
  Var e = binding.Get(FeatureName());
  for (int l = 0; l < layers; ++l) {
    Var messages = Relu(MatMul(e, binding.Get(AggregateName(l))));
    Var aggregated = ScatterMean(messages, src_, dst_, num_nodes_);
    const Var parts[] = {aggregated, e};
    e = MatMul(ConcatCols(parts), binding.Get(CombineName(l)));
    if (rng != nullptr && dropout > 0.0) e = Dropout(e, dropout, *rng);
  }
  return e;
}

Tensor Encoder::Embed(const ParameterSet& params, int layers) const {
  Tape tape;
  ParameterBinding binding(tape, params);
  return Forward(binding, layers, 0.0, nullptr).value();
}

}  // namespace knowddi
