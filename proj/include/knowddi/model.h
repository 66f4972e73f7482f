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

#ifndef KNOWDDI_MODEL_H_
#define KNOWDDI_MODEL_H_

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "knowddi/config.h"
#include "knowddi/encoder.h"
#include "knowddi/graph_store.h"
#include "knowddi/knowledge_subgraph.h"
#include "knowddi/parameters.h"
#include "knowddi/subgraph.h"

namespace knowddi {

// A drug pair with its label vector over the DDI relations. Negatives carry
// an all-zero label.
struct PairSample {
  NodeId head = 0;
  NodeId tail = 0;
  std::vector<double> label;
  bool negative = false;
};

// Multiclass: one sample per triple. Multilabel: one sample per ordered pair
// with every relation of that pair set, in first-seen order.
std::vector<PairSample> BuildSamples(const CombinedNetwork& net,
                                     std::span<const FactTriplet> triples, Task task);
std::vector<PairSample> BuildNegativeSamples(const CombinedNetwork& net,
                                             std::span<const FactTriplet> negatives);

// Index of the largest value; ties go to the lowest index.
size_t ArgMax(std::span<const double> values);

// Node id for a label; DataError naming the closest labels otherwise.
NodeId ResolveNode(const CombinedNetwork& net, std::string_view label);

// Encoder + knowledge-subgraph learner bound to one combined network.
class KnowDdiModel {
 public:
  // Fresh parameters seeded from config.seed.
  KnowDdiModel(const CombinedNetwork& net, const RunConfig& config);
  KnowDdiModel(const CombinedNetwork& net, const RunConfig& config, ParameterSet params);

  static ParameterSet InitParams(const CombinedNetwork& net, const RunConfig& config);

  const RunConfig& config() const { return config_; }
  const CombinedNetwork& network() const { return *net_; }
  const ParameterSet& params() const { return params_; }
  ParameterSet& params() { return params_; }
  const LearnerOptions& learner_options() const { return learner_options_; }

  // Pair subgraph for the configured mode, cached per pair. Thread-safe.
  std::shared_ptr<const DrugFlowSubgraph> Subgraph(NodeId head, NodeId tail) const;

  // Loss of `batch` (sum, or mean with config.mean_reduction). With `grads`
  // the gradients are added to it; with `dropout_rng` the encoder runs in
  // training mode. Per-sample work runs on `threads` workers and is merged
  // in sample order, so results do not depend on the thread count.
  double Loss(std::span<const PairSample> batch, ParameterSet* grads,
              std::mt19937_64* dropout_rng, int threads) const;

  // Eval-mode y_hat per pair.
  std::vector<std::vector<double>> PredictProbabilities(
      std::span<const std::pair<NodeId, NodeId>> pairs, int threads) const;

  KnowledgeSubgraph Knowledge(NodeId head, NodeId tail) const;
  Tensor GenericEmbeddings() const { return encoder_.Embed(params_, config_.layers); }

 private:
  const CombinedNetwork* net_;
  RunConfig config_;
  ParameterSet params_;
  LearnerOptions learner_options_;
  Encoder encoder_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<NodeId, NodeId>, std::shared_ptr<const DrugFlowSubgraph>>
      cache_;
};

}  // namespace knowddi

#endif  // KNOWDDI_MODEL_H_
