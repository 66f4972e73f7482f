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

#ifndef KNOWDDI_ENCODER_H_
#define KNOWDDI_ENCODER_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "knowddi/autodiff.h"
#include "knowddi/graph_store.h"
#include "knowddi/parameters.h"

namespace knowddi {

// Generic node embeddings over the whole combined network. Each layer
// averages relu(e_u W_agg) over the incoming edges of v (relation types are
// ignored) and maps [a_v || e_v] through W_combine. Weights act on row
// vectors, so W_combine is stored 2d x d.
class Encoder {
 public:
  explicit Encoder(const CombinedNetwork& net);

  static std::string FeatureName() { return "encoder.features"; }
  static std::string AggregateName(int layer);
  static std::string CombineName(int layer);

  // Free per-node features ~ U(-1/sqrt(d), 1/sqrt(d)) and Glorot weights.
  static void InitParams(ParameterSet& params, size_t num_nodes, size_t dim,
                         int layers, std::mt19937_64& rng);

  // |V| x d embeddings recorded on the binding's tape. Dropout is applied to
  // every layer output when `rng` is non-null and `dropout` > 0.
  Var Forward(ParameterBinding& binding, int layers, double dropout,
              std::mt19937_64* rng) const;

  // Eval-mode embeddings as a plain tensor.
  Tensor Embed(const ParameterSet& params, int layers) const;

  size_t num_nodes() const { return num_nodes_; }

 private:
  size_t num_nodes_;
  // Edge endpoints ordered by (dst, src, relation) for a fixed summation order.
  std::vector<uint32_t> src_;
  std::vector<uint32_t> dst_;
};

}  // namespace knowddi

#endif  // KNOWDDI_ENCODER_H_
