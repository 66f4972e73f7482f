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

#ifndef KNOWDDI_SUBGRAPH_H_
#define KNOWDDI_SUBGRAPH_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "knowddi/graph_store.h"

namespace knowddi {

// Hides the DDI edges head -> tail from extraction, so a training pair never
// sees its own label as an edge.
struct PairMask {
  NodeId head = 0;
  NodeId tail = 0;
  bool active = false;
};

// Subgraph of the combined network in global ids.
struct InducedSubgraph {
  std::vector<NodeId> nodes;       // sorted
  std::vector<FactTriplet> edges;  // sorted
};

struct LocalEdge {
  uint32_t src = 0;
  RelationId relation = 0;
  uint32_t dst = 0;

  auto operator<=>(const LocalEdge&) const = default;
};

// Pair-specific subgraph with local indexing: head at 0, tail at 1, the rest
// by ascending global id. Also used for the ablation subgraph kinds.
struct DrugFlowSubgraph {
  NodeId head = 0;
  NodeId tail = 0;
  std::vector<NodeId> nodes;
  std::vector<LocalEdge> edges;         // sorted
  std::vector<RelationId> relations;    // sorted, distinct

  size_t size() const { return nodes.size(); }
  bool empty_structure() const { return edges.empty(); }
  // Binary adjacency: 1 iff (u, r, v) is an edge.
  bool Adjacent(uint32_t u, uint32_t v, RelationId r) const;
  std::optional<uint32_t> LocalIndex(NodeId global) const;
};

struct ExtractionOptions {
  int hops = 2;             // K
  int max_path_length = 4;  // P
  size_t node_cap = 256;
  bool mask_target_edges = true;
};

// Nodes within `hops` undirected steps of `node`, including it; sorted.
std::vector<NodeId> KHopNeighborhood(const CombinedNetwork& net, NodeId node,
                                     int hops, const PairMask& mask = {});

// (K-hop(h) intersect K-hop(t)) plus {h, t}, with every network edge among
// the retained nodes.
InducedSubgraph EnclosingSubgraph(const CombinedNetwork& net, NodeId head,
                                  NodeId tail, int hops, const PairMask& mask = {});

// Keeps the nodes and edges lying on a directed walk head -> tail of length
// <= max_path_length, padding short walks with an identity self-loop on the
// tail. With no such walk the result is {head, tail} with no edges.
DrugFlowSubgraph DirectionalPrune(const InducedSubgraph& enclosing, NodeId head,
                                  NodeId tail, int max_path_length,
                                  size_t node_cap = 256);

DrugFlowSubgraph ExtractDrugFlowSubgraph(const CombinedNetwork& net, NodeId head,
                                         NodeId tail,
                                         const ExtractionOptions& options);

// Ablation: the enclosing subgraph itself, capped by undirected distance.
DrugFlowSubgraph ExtractEnclosingOnly(const CombinedNetwork& net, NodeId head,
                                      NodeId tail, const ExtractionOptions& options);

// Ablation: `sample_size` nodes drawn uniformly from the union of the K-hop
// neighbourhoods of head and tail, plus the pair, with induced edges.
DrugFlowSubgraph ExtractRandomSubgraph(const CombinedNetwork& net, NodeId head,
                                       NodeId tail, const ExtractionOptions& options,
                                       size_t sample_size, uint64_t seed);

InducedSubgraph ToInduced(const DrugFlowSubgraph& subgraph);

// Text dump: one "pair", then "node" and "edge" lines with global labels.
void WriteSubgraphDump(std::ostream& out, const DrugFlowSubgraph& subgraph,
                       const Vocabularies& vocab);

}  // namespace knowddi

#endif  // KNOWDDI_SUBGRAPH_H_
