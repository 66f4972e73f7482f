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

#include "knowddi/knowledge_subgraph.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "knowddi/errors.h"

namespace knowddi {
namespace {

constexpr const char* kMlpPair = "learner.mlp.w_pair";
constexpr const char* kMlpRelation = "learner.mlp.w_relation";
constexpr const char* kMlpBias = "learner.mlp.b_hidden";
constexpr const char* kMlpOut = "learner.mlp.w_out";
constexpr const char* kMlpOutBias = "learner.mlp.b_out";

Tensor OnesColumn(size_t n) { return Tensor(n, 1, 1.0); }

}  // namespace

LearnerOptions LearnerOptions::FromConfig(const RunConfig& config) {
  LearnerOptions options;
  options.alpha = config.alpha;
  options.gamma = config.gamma;
  options.iterations = config.iterations;
  options.learn_structure = config.subgraph_mode == SubgraphMode::kKnowledge ||
                            config.subgraph_mode == SubgraphMode::kKnowledgeNoResemble;
  options.add_resemble = config.subgraph_mode == SubgraphMode::kKnowledge;
  return options;
}

CandidateSet CandidateSet::Build(const DrugFlowSubgraph& subgraph, bool add_resemble) {
  CandidateSet set;
  const size_t n = subgraph.size();
  set.num_nodes = n;
  std::vector<std::vector<RelationId>> originals(n * n);
  for (const LocalEdge& e : subgraph.edges) {
    originals[static_cast<size_t>(e.src) * n + e.dst].push_back(e.relation);
  }
  for (auto& rels : originals) std::sort(rels.begin(), rels.end());

  for (uint32_t v = 0; v < n; ++v) {
    for (uint32_t u = 0; u < n; ++u) {
      if (u == v) continue;
      const auto& rels = originals[static_cast<size_t>(u) * n + v];
      for (RelationId r : rels) set.entries.push_back({u, v, r, true});
      if (rels.empty() && add_resemble) {
        set.entries.push_back({u, v, kResembleRelation, false});
      }
    }
  }
  set.num_offdiagonal = set.entries.size();
  for (uint32_t v = 0; v < n; ++v) {
    const auto& rels = originals[static_cast<size_t>(v) * n + v];
    for (RelationId r : rels) set.entries.push_back({v, v, r, true});
    if (rels.empty()) set.entries.push_back({v, v, kResembleRelation, false});
  }
  set.relations = subgraph.relations;
  set.relations.push_back(kResembleRelation);
  return set;
}

double KnowledgeSubgraph::Strength(uint32_t u, uint32_t v, RelationId r) const {
  for (const StrengthEntry& e : entries) {
    if (e.src == u && e.dst == v && e.relation == r) return e.strength;
  }
  return 0.0;
}

std::vector<double> KnowledgeSubgraph::DenseStrengths() const {
  const size_t n = base.size();
  const size_t slots = relations.size();
  std::vector<double> dense(n * n * slots, 0.0);
  for (const StrengthEntry& e : entries) {
    const auto it = std::find(relations.begin(), relations.end(), e.relation);
    const auto slot = static_cast<size_t>(it - relations.begin());
    dense[(static_cast<size_t>(e.src) * n + e.dst) * slots + slot] = e.strength;
  }
  return dense;
}

std::vector<StrengthEntry> KnowledgeSubgraph::Edges() const {
  std::vector<StrengthEntry> out;
  for (const StrengthEntry& e : entries) {
    if (e.strength > 0.0 && (e.original || e.relation == kResembleRelation)) {
      out.push_back(e);
    }
  }
  return out;
}

std::string KnowledgeSubgraphLearner::PropagationName(RelationId r) {
  return "learner.w_rel." + std::to_string(r);
}

void KnowledgeSubgraphLearner::InitParams(ParameterSet& params, size_t num_relations,
                                          size_t num_classes, size_t dim,
                                          std::mt19937_64& rng) {
  params.Add(RelationEmbeddingName(),
             UniformTensor(num_relations, dim, 1.0 / std::sqrt(static_cast<double>(dim)),
                           rng));
  params.Add(kMlpPair, GlorotTensor(dim, dim, rng));
  params.Add(kMlpRelation, GlorotTensor(dim, dim, rng));
  params.Add(kMlpBias, Tensor(1, dim));
  params.Add(kMlpOut, GlorotTensor(dim, 1, rng));
  params.Add(kMlpOutBias, Tensor(1, 1));
  for (RelationId r = 0; r < num_relations; ++r) {
    params.Add(PropagationName(r), GlorotTensor(dim, dim, rng));
  }
  params.Add(ClassifierName(), GlorotTensor(3 * dim, num_classes, rng));
}

Var KnowledgeSubgraphLearner::RelevanceScores(ParameterBinding& binding,
                                              Var embeddings,
                                              std::span<const Candidate> entries) {
  std::vector<uint32_t> src, dst, rel_slot;
  std::vector<uint32_t> unique_relations;
  std::map<RelationId, uint32_t> slot_of;
  src.reserve(entries.size());
  dst.reserve(entries.size());
  rel_slot.reserve(entries.size());
  for (const Candidate& c : entries) {
    src.push_back(c.src);
    dst.push_back(c.dst);
    auto [it, inserted] =
        slot_of.emplace(c.relation, static_cast<uint32_t>(unique_relations.size()));
    if (inserted) unique_relations.push_back(c.relation);
    rel_slot.push_back(it->second);
  }
  Var pair = NegAbsDiff(GatherRows(embeddings, src), GatherRows(embeddings, dst));
  Var relation_rows = GatherRows(binding.Get(RelationEmbeddingName()), unique_relations);
  Var relation_term = GatherRows(MatMul(relation_rows, binding.Get(kMlpRelation)), rel_slot);
  Var hidden = Relu(Add(Add(MatMul(pair, binding.Get(kMlpPair)), relation_term),
                        binding.Get(kMlpBias)));
  return Sigmoid(Add(MatMul(hidden, binding.Get(kMlpOut)), binding.Get(kMlpOutBias)));
}

std::pair<Var, Var> KnowledgeSubgraphLearner::MergeAndThreshold(
    const CandidateSet& candidates, Var relevance, double alpha, double gamma) {
  Tape& tape = *relevance.tape();
  const size_t m = candidates.entries.size();
  if (relevance.value().size() != m) {
    throw ShapeError("MergeAndThreshold: relevance does not cover the candidates");
  }
  Tensor prior(m, 1);
  std::vector<uint32_t> groups(m);
  for (size_t i = 0; i < m; ++i) {
    prior[i] = candidates.entries[i].original ? 1.0 : 0.0;
    groups[i] = candidates.entries[i].dst;
  }
  Var merged = Add(Scale(tape.Constant(std::move(prior)), alpha),
                   Scale(relevance, 1.0 - alpha));
  Var normalized = GroupedSoftmax(merged, groups, candidates.num_nodes);
  Var strengths = Relu(AddScalar(normalized, -gamma));
  return {strengths, normalized};
}

Var KnowledgeSubgraphLearner::Propagate(ParameterBinding& binding,
                                        const CandidateSet& candidates,
                                        Var strengths, Var embeddings) {
  const size_t n = candidates.num_nodes;
  Var total;
  for (RelationId r : candidates.relations) {
    std::vector<uint32_t> idx, src, dst;
    for (size_t i = 0; i < candidates.entries.size(); ++i) {
      const Candidate& c = candidates.entries[i];
      if (c.relation != r) continue;
      idx.push_back(static_cast<uint32_t>(i));
      src.push_back(c.src);
      dst.push_back(c.dst);
    }
    if (idx.empty()) continue;
    Var aggregated =
        WeightedScatterSum(GatherRows(strengths, idx), embeddings, src, dst, n);
    Var q = Relu(MatMul(aggregated, binding.Get(PropagationName(r))));
    total = total.valid() ? Add(total, q) : q;
  }
  return Scale(total, 1.0 / static_cast<double>(candidates.relations.size()));
}

LearnerTrace KnowledgeSubgraphLearner::Forward(ParameterBinding& binding,
                                               const DrugFlowSubgraph& subgraph,
                                               Var initial_embeddings,
                                               const LearnerOptions& options) {
  Tape& tape = *initial_embeddings.tape();
  LearnerTrace trace;
  trace.candidates = CandidateSet::Build(
      subgraph, options.learn_structure && options.add_resemble);
  const CandidateSet& cand = trace.candidates;
  if (initial_embeddings.value().rows() != cand.num_nodes) {
    throw ShapeError("learner: embedding rows do not match subgraph nodes");
  }
  const size_t num_self = cand.entries.size() - cand.num_offdiagonal;

  Var fixed_strengths;
  if (!options.learn_structure) {
    Tensor prior(cand.entries.size(), 1);
    std::vector<uint32_t> groups(cand.entries.size());
    for (size_t i = 0; i < cand.entries.size(); ++i) {
      prior[i] = cand.entries[i].original ? 1.0 : 0.0;
      groups[i] = cand.entries[i].dst;
    }
    fixed_strengths = GroupedSoftmax(tape.Constant(std::move(prior)), groups, cand.num_nodes);
  }

  Var h = initial_embeddings;
  for (int it = 0; it < options.iterations; ++it) {
    Var strengths, normalized;
    if (options.learn_structure) {
      Var relevance = tape.Constant(OnesColumn(num_self));
      if (cand.num_offdiagonal > 0) {
        Var scored = RelevanceScores(
            binding, h,
            std::span<const Candidate>(cand.entries.data(), cand.num_offdiagonal));
        const Var parts[] = {scored, relevance};
        relevance = ConcatRows(parts);
      }
      std::tie(strengths, normalized) =
          MergeAndThreshold(cand, relevance, options.alpha, options.gamma);
    } else {
      strengths = normalized = fixed_strengths;
    }
    trace.normalized.push_back(normalized);
    trace.strengths.push_back(strengths);
    h = Propagate(binding, cand, strengths, h);
  }
  trace.embeddings = h;
  trace.pooled = MeanRows(h);
  const uint32_t head_row[] = {0};
  const uint32_t tail_row[] = {1};
  const Var readout[] = {trace.pooled, GatherRows(h, head_row), GatherRows(h, tail_row)};
  trace.logits = MatMul(ConcatCols(readout), binding.Get(ClassifierName()));
  return trace;
}

std::vector<double> DenseRelevanceScores(const ParameterSet& params,
                                         const Tensor& embeddings,
                                         std::span<const RelationId> relations) {
  const size_t n = embeddings.rows();
  const size_t slots = relations.size();
  std::vector<Candidate> entries;
  for (uint32_t u = 0; u < n; ++u) {
    for (uint32_t v = 0; v < n; ++v) {
      if (u == v) continue;
      for (RelationId r : relations) entries.push_back({u, v, r, false});
    }
  }
  std::vector<double> dense(n * n * slots, 1.0);
  if (entries.empty()) return dense;
  Tape tape;
  ParameterBinding binding(tape, params);
  const Tensor scores = KnowledgeSubgraphLearner::RelevanceScores(
                            binding, tape.Constant(embeddings), entries)
                            .value();
  size_t k = 0;
  for (uint32_t u = 0; u < n; ++u) {
    for (uint32_t v = 0; v < n; ++v) {
      if (u == v) continue;
      for (size_t s = 0; s < slots; ++s) {
        dense[(static_cast<size_t>(u) * n + v) * slots + s] = scores[k++];
      }
    }
  }
  return dense;
}

Tensor GatherNodeRows(const Tensor& table, std::span<const NodeId> nodes) {
  Tensor out(nodes.size(), table.cols());
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= table.rows()) throw ShapeError("GatherNodeRows: node out of range");
    const auto src = table.row(nodes[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

KnowledgeSubgraph GenerateKnowledgeSubgraph(const DrugFlowSubgraph& subgraph,
                                            const Tensor& generic_embeddings,
                                            const ParameterSet& params,
                                            const LearnerOptions& options) {
  Tape tape;
  ParameterBinding binding(tape, params);
  Var h0 = tape.Constant(GatherNodeRows(generic_embeddings, subgraph.nodes));
  LearnerTrace trace = KnowledgeSubgraphLearner::Forward(binding, subgraph, h0, options);
  KnowledgeSubgraph out;
  out.base = subgraph;
  out.relations = trace.candidates.relations;
  const Tensor& strengths = trace.strengths.back().value();
  const Tensor& normalized = trace.normalized.back().value();
  out.entries.reserve(trace.candidates.entries.size());
  for (size_t i = 0; i < trace.candidates.entries.size(); ++i) {
    const Candidate& c = trace.candidates.entries[i];
    out.entries.push_back({c.src, c.dst, c.relation, c.original, normalized[i], strengths[i]});
  }
  out.embeddings = trace.embeddings.value();
  out.pooled = trace.pooled.value();
  return out;
}

Var OutputProbabilities(Var logits, Task task) {
  return task == Task::kMulticlass ? SoftmaxRows(logits) : Sigmoid(logits);
}

std::vector<double> Predict(const KnowledgeSubgraph& subgraph, Task task,
                            const ParameterSet& params) {
  Tape tape;
  Var h = tape.Constant(subgraph.embeddings);
  const uint32_t head_row[] = {0};
  const uint32_t tail_row[] = {1};
  const Var readout[] = {tape.Constant(subgraph.pooled), GatherRows(h, head_row),
                         GatherRows(h, tail_row)};
  Var logits = MatMul(ConcatCols(readout),
                      tape.Constant(params.at(KnowledgeSubgraphLearner::ClassifierName())));
  const auto values = OutputProbabilities(logits, task).value().values();
  return {values.begin(), values.end()};
}

}  // namespace knowddi
