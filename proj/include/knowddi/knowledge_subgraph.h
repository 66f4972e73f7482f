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

#ifndef KNOWDDI_KNOWLEDGE_SUBGRAPH_H_
#define KNOWDDI_KNOWLEDGE_SUBGRAPH_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "knowddi/autodiff.h"
#include "knowddi/config.h"
#include "knowddi/graph_store.h"
#include "knowddi/parameters.h"
#include "knowddi/subgraph.h"

namespace knowddi {

struct LearnerOptions {
  double alpha = 0.5;
  double gamma = 0.1;
  int iterations = 3;
  // Learn strengths from relevance scores. When false the strengths are the
  // normalised original structure (alpha treated as 1).
  bool learn_structure = true;
  // Offer resemble candidates between distinct nodes lacking an edge.
  bool add_resemble = true;

  static LearnerOptions FromConfig(const RunConfig& config);
};

// One entry of the candidate support of the strength tensor.
struct Candidate {
  uint32_t src = 0;
  uint32_t dst = 0;
  RelationId relation = 0;
  // Original edge of the drug-flow subgraph (A0 = 1); otherwise a resemble
  // candidate (A0 = 0).
  bool original = false;
};

// Candidate support: every original edge (u, r, v), plus one resemble entry
// for each ordered pair (u, v) without an original edge. Self pairs always
// carry an entry, so every node keeps a self weight. Entries with u != v come
// first, then the self entries; both blocks are ordered by (dst, src, rel).
struct CandidateSet {
  std::vector<Candidate> entries;
  size_t num_offdiagonal = 0;
  size_t num_nodes = 0;
  // Relations of the learned subgraph: the drug-flow relations plus resemble.
  std::vector<RelationId> relations;

  static CandidateSet Build(const DrugFlowSubgraph& subgraph, bool add_resemble);
};

struct StrengthEntry {
  uint32_t src = 0;
  uint32_t dst = 0;
  RelationId relation = 0;
  bool original = false;
  double normalized = 0.0;  // edge-softmax output before the threshold
  double strength = 0.0;    // A = relu(normalized - gamma)
};

// Learned structure and refined embeddings for one drug pair.
struct KnowledgeSubgraph {
  DrugFlowSubgraph base;
  std::vector<RelationId> relations;   // base relations + resemble (last slot)
  std::vector<StrengthEntry> entries;  // final-iteration candidate support
  Tensor embeddings;                   // |V| x d
  Tensor pooled;                       // 1 x d

  // A(u, v, r); zero outside the candidate support.
  double Strength(uint32_t u, uint32_t v, RelationId r) const;
  // Dense strength tensor, index ((u * n) + v) * relations.size() + slot.
  std::vector<double> DenseStrengths() const;
  // Edges with positive strength: kept originals and added resemble edges.
  std::vector<StrengthEntry> Edges() const;
};

// Forward pass of the learner recorded on a tape.
struct LearnerTrace {
  CandidateSet candidates;
  std::vector<Var> normalized;  // per iteration, |entries| x 1
  std::vector<Var> strengths;   // per iteration, |entries| x 1
  Var embeddings;
  Var pooled;
  Var logits;  // 1 x num_classes
};

class KnowledgeSubgraphLearner {
 public:
  static std::string RelationEmbeddingName() { return "learner.relation_embeddings"; }
  static std::string PropagationName(RelationId r);
  static std::string ClassifierName() { return "learner.classifier"; }

  static void InitParams(ParameterSet& params, size_t num_relations,
                         size_t num_classes, size_t dim, std::mt19937_64& rng);

  // C(u, v, r) for the candidate entries with u != v: a one-hidden-layer MLP
  // over [exp(-|h_u - h_v|) || h_r] with a sigmoid output. Returns m x 1.
  static Var RelevanceScores(ParameterBinding& binding, Var embeddings,
                             std::span<const Candidate> entries);

  // relu(softmax_in(alpha * A0 + (1 - alpha) * C) - gamma), where the softmax
  // runs over each node's incoming candidates. `relevance` covers all entries
  // (self entries fixed at 1). Also returns the pre-threshold values.
  static std::pair<Var, Var> MergeAndThreshold(const CandidateSet& candidates,
                                               Var relevance, double alpha,
                                               double gamma);

  // H' = mean over relations r of relu(A_r^T H W_r).
  static Var Propagate(ParameterBinding& binding, const CandidateSet& candidates,
                       Var strengths, Var embeddings);

  // T rounds of scoring, merging and propagation, then pooling and logits.
  static LearnerTrace Forward(ParameterBinding& binding,
                              const DrugFlowSubgraph& subgraph,
                              Var initial_embeddings, const LearnerOptions& options);
};

// Dense C over every ordered pair and every relation in `relations` (slot
// order), with C(v, v, r) = 1. Index ((u * n) + v) * relations.size() + slot.
std::vector<double> DenseRelevanceScores(const ParameterSet& params,
                                         const Tensor& embeddings,
                                         std::span<const RelationId> relations);

// Value-level generation from the generic embedding table.
KnowledgeSubgraph GenerateKnowledgeSubgraph(const DrugFlowSubgraph& subgraph,
                                            const Tensor& generic_embeddings,
                                            const ParameterSet& params,
                                            const LearnerOptions& options);

// Softmax (multiclass) or sigmoid (multilabel) of the logits.
Var OutputProbabilities(Var logits, Task task);

// y_hat for a finished knowledge subgraph.
std::vector<double> Predict(const KnowledgeSubgraph& subgraph, Task task,
                            const ParameterSet& params);

// Rows of `table` for the subgraph's nodes, in local order.
Tensor GatherNodeRows(const Tensor& table, std::span<const NodeId> nodes);

}  // namespace knowddi

#endif  // KNOWDDI_KNOWLEDGE_SUBGRAPH_H_
