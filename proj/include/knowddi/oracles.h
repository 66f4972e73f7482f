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

#ifndef KNOWDDI_ORACLES_H_
#define KNOWDDI_ORACLES_H_

// Brute-force reference implementations and the self-check suites built on
// them. Shared by the unit tests, the acceptance binary and `selftest`.

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "knowddi/graph_store.h"
#include "knowddi/knowledge_subgraph.h"
#include "knowddi/metrics.h"
#include "knowddi/model.h"
#include "knowddi/subgraph.h"

namespace knowddi::oracles {

// Random directed multigraph on nodes 0..n-1 (n in [2, max_nodes]) with
// relation ids starting after the reserved ones.
InducedSubgraph RandomMultigraph(std::mt19937_64& rng, size_t max_nodes,
                                 size_t max_relations);

struct WalkSets {
  std::set<NodeId> nodes;
  std::set<FactTriplet> edges;
};

// Every node and edge on some directed walk head -> tail of length <= P,
// found by enumerating all walks. Adds (tail, identity, tail) when the
// shortest such walk is shorter than P; {head, tail} when there is none.
WalkSets EnumerateWalkSets(const InducedSubgraph& graph, NodeId head, NodeId tail, int P);

double PairwiseAuroc(std::span<const double> scores, std::span<const bool> labels);
// Loops over each distinct threshold, recounting precision and recall.
double ThresholdLoopAveragePrecision(std::span<const double> scores,
                                     std::span<const bool> labels);
// Ranks by repeated selection of the best remaining record (ties: lower index).
double RankLoopApAtK(std::span<const double> scores, std::span<const bool> labels,
                     size_t k);
ClassificationMetrics ConfusionMatrixMetrics(std::span<const size_t> truth,
                                             std::span<const size_t> predicted,
                                             size_t num_classes);

// Small random combined network: <= max_nodes nodes, two DDI relations and
// one KG relation. The DDI triples are returned through `ddi`.
CombinedNetwork RandomNetwork(std::mt19937_64& rng, size_t max_nodes,
                              std::vector<FactTriplet>* ddi);

// max over every parameter entry of |analytic - central difference| /
// max(1, |analytic|) for model.Loss(batch).
double ModelGradientError(KnowDdiModel& model, std::span<const PairSample> batch,
                          double eps, std::string* worst_parameter = nullptr);

struct StructureReport {
  double max_normalized_sum_error = 0.0;
  double max_threshold_error = 0.0;
  size_t dichotomy_violations = 0;
  double max_probability_sum_error = 0.0;
};

// Checks a learned subgraph: incoming normalised strengths sum to one per
// node, strengths equal relu(normalized - gamma), and every surviving edge is
// either a kept original edge or an added resemble edge between nodes that
// had no edge. Multiclass probabilities must sum to one.
void CheckKnowledgeSubgraph(const KnowledgeSubgraph& ks, const LearnerOptions& options,
                            Task task, const ParameterSet& params, StructureReport* report);

struct SuiteResult {
  std::string name;
  bool passed = false;
  size_t cases = 0;
  double max_error = 0.0;
  std::string detail;
};

SuiteResult GradientSuite(size_t instances, uint64_t seed);
SuiteResult SubgraphSuite(size_t graphs, uint64_t seed);
SuiteResult MetricSuite(size_t score_sets, uint64_t seed);
SuiteResult StructureSuite(size_t subgraphs, uint64_t seed);

}  // namespace knowddi::oracles

#endif  // KNOWDDI_ORACLES_H_
