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

#include "knowddi/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "knowddi/errors.h"
#include "knowddi/losses.h"
#include "knowddi/parallel.h"

namespace knowddi {
namespace {

size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Tensor LabelRow(const std::vector<double>& label) {
  return Tensor(1, label.size(), label);
}

}  // namespace

std::vector<PairSample> BuildSamples(const CombinedNetwork& net,
                                     std::span<const FactTriplet> triples, Task task) {
  const size_t classes = net.num_classes();
  std::vector<PairSample> out;
  std::map<std::pair<NodeId, NodeId>, size_t> index;
  for (const FactTriplet& t : triples) {
    const auto cls = net.ClassIndex(t.relation);
    if (!cls) throw DataError("triple relation is not a DDI relation");
    if (task == Task::kMultilabel) {
      auto [it, inserted] = index.emplace(std::make_pair(t.head, t.tail), out.size());
      if (inserted) out.push_back({t.head, t.tail, std::vector<double>(classes, 0.0), false});
      out[it->second].label[*cls] = 1.0;
    } else {
      PairSample s{t.head, t.tail, std::vector<double>(classes, 0.0), false};
      s.label[*cls] = 1.0;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<PairSample> BuildNegativeSamples(const CombinedNetwork& net,
                                             std::span<const FactTriplet> negatives) {
  std::vector<PairSample> out;
  out.reserve(negatives.size());
  for (const FactTriplet& t : negatives) {
    out.push_back({t.head, t.tail, std::vector<double>(net.num_classes(), 0.0), true});
  }
  return out;
}

size_t ArgMax(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

NodeId ResolveNode(const CombinedNetwork& net, std::string_view label) {
  if (auto id = net.vocab().nodes.Find(label)) return *id;
  std::vector<std::pair<size_t, std::string_view>> ranked;
  for (const std::string& candidate : net.vocab().nodes.labels()) {
    ranked.emplace_back(EditDistance(label, candidate), candidate);
  }
  const size_t shown = std::min<size_t>(3, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + shown, ranked.end());
  std::ostringstream msg;
  msg << "unknown node label '" << label << "'";
  if (shown > 0) {
    msg << "; closest labels:";
    for (size_t i = 0; i < shown; ++i) msg << (i ? ", " : " ") << ranked[i].second;
  }
  throw DataError(msg.str());
}

ParameterSet KnowDdiModel::InitParams(const CombinedNetwork& net, const RunConfig& config) {
  std::mt19937_64 rng(config.seed);
  ParameterSet params;
  Encoder::InitParams(params, net.num_nodes(), config.dim, config.layers, rng);
  KnowledgeSubgraphLearner::InitParams(params, net.num_relations(), net.num_classes(),
                                       config.dim, rng);
  return params;
}

KnowDdiModel::KnowDdiModel(const CombinedNetwork& net, const RunConfig& config)
    : KnowDdiModel(net, config, InitParams(net, config)) {}

KnowDdiModel::KnowDdiModel(const CombinedNetwork& net, const RunConfig& config,
                           ParameterSet params)
    : net_(&net),
      config_(config),
      params_(std::move(params)),
      learner_options_(LearnerOptions::FromConfig(config)),
      encoder_(net) {
  config_.Validate();
}

std::shared_ptr<const DrugFlowSubgraph> KnowDdiModel::Subgraph(NodeId head,
                                                               NodeId tail) const {
  const auto key = std::make_pair(head, tail);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  ExtractionOptions options;
  options.hops = config_.hops;
  options.max_path_length = config_.max_path_length;
  options.node_cap = config_.node_cap;
  DrugFlowSubgraph sub;
  switch (config_.subgraph_mode) {
    case SubgraphMode::kRandom:
      sub = ExtractRandomSubgraph(*net_, head, tail, options,
                                  config_.random_subgraph_size, config_.seed);
      break;
    case SubgraphMode::kEnclosing:
      sub = ExtractEnclosingOnly(*net_, head, tail, options);
      break;
    default:
      sub = ExtractDrugFlowSubgraph(*net_, head, tail, options);
      break;
  }
  auto shared = std::make_shared<const DrugFlowSubgraph>(std::move(sub));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.emplace(key, std::move(shared)).first->second;
}

double KnowDdiModel::Loss(std::span<const PairSample> batch, ParameterSet* grads,
                          std::mt19937_64* dropout_rng, int threads) const {
  if (batch.empty()) return 0.0;
  const double weight =
      config_.mean_reduction ? 1.0 / static_cast<double>(batch.size()) : 1.0;
  const bool want_grads = grads != nullptr;

  Tape encoder_tape;
  ParameterBinding encoder_binding(encoder_tape, params_);
  Var generic = encoder_.Forward(encoder_binding, config_.layers, config_.dropout,
                                 dropout_rng);
  const Tensor& table = generic.value();

  struct SampleResult {
    double loss = 0.0;
    std::vector<std::pair<size_t, Tensor>> param_grads;
    Tensor embedding_grad;
    std::shared_ptr<const DrugFlowSubgraph> subgraph;
  };
  std::vector<SampleResult> results(batch.size());
  ParallelFor(batch.size(), threads, [&](size_t i) {
    const PairSample& sample = batch[i];
    SampleResult& result = results[i];
    result.subgraph = Subgraph(sample.head, sample.tail);
    Tape tape;
    ParameterBinding binding(tape, params_);
    Tensor rows = GatherNodeRows(table, result.subgraph->nodes);
    Var h0 = want_grads ? tape.Variable(std::move(rows)) : tape.Constant(std::move(rows));
    LearnerTrace trace =
        KnowledgeSubgraphLearner::Forward(binding, *result.subgraph, h0, learner_options_);
    Var probs = OutputProbabilities(trace.logits, config_.task);
    Var loss;
    if (config_.task == Task::kMulticlass) {
      loss = MulticlassLoss(probs, LabelRow(sample.label));
    } else {
      const bool negative[] = {sample.negative};
      loss = MultilabelLoss(probs, LabelRow(sample.label), negative);
    }
    loss = Scale(loss, weight);
    result.loss = loss.value().item();
    if (want_grads) {
      tape.Backward(loss);
      result.param_grads = binding.CollectGrads();
      result.embedding_grad = h0.grad();
    }
  });

  double total = 0.0;
  Tensor table_grad;
  if (want_grads) table_grad = Tensor::ZerosLike(table);
  for (const SampleResult& result : results) {
    total += result.loss;
    if (!want_grads) continue;
    for (const auto& [index, g] : result.param_grads) grads->value(index).AddInPlace(g);
    if (result.embedding_grad.empty()) continue;
    const auto& nodes = result.subgraph->nodes;
    for (size_t j = 0; j < nodes.size(); ++j) {
      auto dst = table_grad.row(nodes[j]);
      const auto src = result.embedding_grad.row(j);
      for (size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
    }
  }
  if (want_grads) {
    encoder_tape.Backward(generic, table_grad);
    encoder_binding.AccumulateGrads(*grads);
  }
  return total;
}

std::vector<std::vector<double>> KnowDdiModel::PredictProbabilities(
    std::span<const std::pair<NodeId, NodeId>> pairs, int threads) const {
  const Tensor table = GenericEmbeddings();
  std::vector<std::vector<double>> out(pairs.size());
  ParallelFor(pairs.size(), threads, [&](size_t i) {
    const auto sub = Subgraph(pairs[i].first, pairs[i].second);
    const KnowledgeSubgraph ks =
        GenerateKnowledgeSubgraph(*sub, table, params_, learner_options_);
    out[i] = Predict(ks, config_.task, params_);
  });
  return out;
}

KnowledgeSubgraph KnowDdiModel::Knowledge(NodeId head, NodeId tail) const {
  const auto sub = Subgraph(head, tail);
  return GenerateKnowledgeSubgraph(*sub, GenericEmbeddings(), params_, learner_options_);
}

}  // namespace knowddi
