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

#include "knowddi/subgraph.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>
#include <random>
#include <set>

#include "knowddi/errors.h"

namespace knowddi {
namespace {

constexpr int kUnreached = std::numeric_limits<int>::max() / 4;

bool Masked(const CombinedNetwork& net, const PairMask& mask, NodeId u,
            RelationId r, NodeId v) {
  return mask.active && u == mask.head && v == mask.tail && net.IsDdiRelation(r);
}

bool Contains(const std::vector<NodeId>& sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

// Undirected BFS levels within `hops`; unreached nodes are absent.
std::vector<std::pair<NodeId, int>> UndirectedLevels(const CombinedNetwork& net,
                                                     NodeId source, int hops,
                                                     const PairMask& mask) {
  std::vector<std::pair<NodeId, int>> out;
  std::vector<int> dist(net.num_nodes(), -1);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    out.emplace_back(u, dist[u]);
    if (dist[u] == hops) continue;
    auto visit = [&](NodeId v) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    };
    for (const Neighbor& nb : net.neighbors(u, Direction::kOut)) {
      if (!Masked(net, mask, u, nb.relation, nb.node)) visit(nb.node);
    }
    for (const Neighbor& nb : net.neighbors(u, Direction::kIn)) {
      if (!Masked(net, mask, nb.node, nb.relation, u)) visit(nb.node);
    }
  }
  return out;
}

std::vector<FactTriplet> InducedEdges(const CombinedNetwork& net,
                                      const std::vector<NodeId>& nodes,
                                      const PairMask& mask) {
  std::vector<FactTriplet> edges;
  for (NodeId u : nodes) {
    for (const Neighbor& nb : net.neighbors(u, Direction::kOut)) {
      if (Contains(nodes, nb.node) && !Masked(net, mask, u, nb.relation, nb.node)) {
        edges.push_back({u, nb.relation, nb.node});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Orders head, tail, then the remaining nodes by id and remaps the edges.
DrugFlowSubgraph Localize(NodeId head, NodeId tail, std::vector<NodeId> kept,
                          const std::vector<FactTriplet>& edges,
                          bool always_identity) {
  DrugFlowSubgraph out;
  out.head = head;
  out.tail = tail;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  out.nodes = {head, tail};
  for (NodeId v : kept) {
    if (v != head && v != tail) out.nodes.push_back(v);
  }
  std::set<RelationId> relations;
  for (const FactTriplet& e : edges) {
    const auto u = out.LocalIndex(e.head);
    const auto v = out.LocalIndex(e.tail);
    if (!u || !v) continue;
    out.edges.push_back({*u, e.relation, *v});
    relations.insert(e.relation);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  if (always_identity && !out.edges.empty()) relations.insert(kIdentityRelation);
  out.relations.assign(relations.begin(), relations.end());
  return out;
}

}  // namespace

bool DrugFlowSubgraph::Adjacent(uint32_t u, uint32_t v, RelationId r) const {
  return std::binary_search(edges.begin(), edges.end(), LocalEdge{u, r, v});
}

std::optional<uint32_t> DrugFlowSubgraph::LocalIndex(NodeId global) const {
  if (global == head) return 0;
  if (global == tail) return 1;
  auto it = std::lower_bound(nodes.begin() + 2, nodes.end(), global);
  if (it == nodes.end() || *it != global) return std::nullopt;
  return static_cast<uint32_t>(it - nodes.begin());
}

std::vector<NodeId> KHopNeighborhood(const CombinedNetwork& net, NodeId node,
                                     int hops, const PairMask& mask) {
  if (node >= net.num_nodes()) {
    throw DataError("invalid node id " + std::to_string(node));
  }
  if (hops < 1) throw DataError("hop count must be >= 1");
  std::vector<NodeId> out;
  for (const auto& [v, d] : UndirectedLevels(net, node, hops, mask)) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

InducedSubgraph EnclosingSubgraph(const CombinedNetwork& net, NodeId head,
                                  NodeId tail, int hops, const PairMask& mask) {
  if (head == tail) throw DataError("enclosing subgraph of a self-pair is undefined");
  const auto around_head = KHopNeighborhood(net, head, hops, mask);
  const auto around_tail = KHopNeighborhood(net, tail, hops, mask);
  InducedSubgraph out;
  std::set_intersection(around_head.begin(), around_head.end(), around_tail.begin(),
                        around_tail.end(), std::back_inserter(out.nodes));
  for (NodeId v : {head, tail}) {
    if (!Contains(out.nodes, v)) {
      out.nodes.insert(std::lower_bound(out.nodes.begin(), out.nodes.end(), v), v);
    }
  }
  out.edges = InducedEdges(net, out.nodes, mask);
  return out;
}

DrugFlowSubgraph DirectionalPrune(const InducedSubgraph& enclosing, NodeId head,
                                  NodeId tail, int max_path_length, size_t node_cap) {
  const std::vector<NodeId>& nodes = enclosing.nodes;
  const size_t n = nodes.size();
  auto local = [&](NodeId v) {
    return static_cast<size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) -
                               nodes.begin());
  };
  std::vector<std::vector<size_t>> out_adj(n), in_adj(n);
  for (const FactTriplet& e : enclosing.edges) {
    out_adj[local(e.head)].push_back(local(e.tail));
    in_adj[local(e.tail)].push_back(local(e.head));
  }
  auto bfs = [n](size_t source, const std::vector<std::vector<size_t>>& adj) {
    std::vector<int> dist(n, kUnreached);
    std::deque<size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
      const size_t u = queue.front();
      queue.pop_front();
      for (size_t v : adj[u]) {
        if (dist[v] == kUnreached) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return dist;
  };
  if (!Contains(nodes, head) || !Contains(nodes, tail)) {
    throw DataError("enclosing subgraph must contain both pair nodes");
  }
  const std::vector<int> from_head = bfs(local(head), out_adj);
  const std::vector<int> to_tail = bfs(local(tail), in_adj);
  const int distance = from_head[local(tail)];
  if (distance > max_path_length) {
    return Localize(head, tail, {head, tail}, {}, false);
  }

  std::vector<std::pair<int, NodeId>> retained;
  for (size_t i = 0; i < n; ++i) {
    const int through = from_head[i] + to_tail[i];
    if (through <= max_path_length) retained.emplace_back(through, nodes[i]);
  }
  if (retained.size() > node_cap) {
    std::sort(retained.begin(), retained.end());
    std::vector<std::pair<int, NodeId>> capped;
    for (const auto& entry : retained) {
      if (entry.second == head || entry.second == tail) capped.push_back(entry);
    }
    for (const auto& entry : retained) {
      if (capped.size() >= std::max<size_t>(node_cap, 2)) break;
      if (entry.second != head && entry.second != tail) capped.push_back(entry);
    }
    retained = std::move(capped);
  }
  std::vector<NodeId> kept;
  for (const auto& entry : retained) kept.push_back(entry.second);
  std::sort(kept.begin(), kept.end());

  std::vector<FactTriplet> edges;
  for (const FactTriplet& e : enclosing.edges) {
    if (from_head[local(e.head)] + 1 + to_tail[local(e.tail)] <= max_path_length &&
        Contains(kept, e.head) && Contains(kept, e.tail)) {
      edges.push_back(e);
    }
  }
  if (distance < max_path_length) edges.push_back({tail, kIdentityRelation, tail});
  return Localize(head, tail, std::move(kept), edges, true);
}

DrugFlowSubgraph ExtractDrugFlowSubgraph(const CombinedNetwork& net, NodeId head,
                                         NodeId tail,
                                         const ExtractionOptions& options) {
  const PairMask mask{head, tail, options.mask_target_edges};
  const InducedSubgraph enclosing =
      EnclosingSubgraph(net, head, tail, options.hops, mask);
  return DirectionalPrune(enclosing, head, tail, options.max_path_length,
                          options.node_cap);
}

DrugFlowSubgraph ExtractEnclosingOnly(const CombinedNetwork& net, NodeId head,
                                      NodeId tail, const ExtractionOptions& options) {
  if (head == tail) throw DataError("enclosing subgraph of a self-pair is undefined");
  const PairMask mask{head, tail, options.mask_target_edges};
  const auto levels_h = UndirectedLevels(net, head, options.hops, mask);
  const auto levels_t = UndirectedLevels(net, tail, options.hops, mask);
  std::vector<int> dh(net.num_nodes(), -1), dt(net.num_nodes(), -1);
  for (const auto& [v, d] : levels_h) dh[v] = d;
  for (const auto& [v, d] : levels_t) dt[v] = d;
  std::vector<std::pair<int, NodeId>> ranked;
  for (const auto& [v, d] : levels_h) {
    if (v != head && v != tail && dt[v] >= 0) ranked.emplace_back(d + dt[v], v);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<NodeId> kept{head, tail};
  for (const auto& entry : ranked) {
    if (kept.size() >= std::max<size_t>(options.node_cap, 2)) break;
    kept.push_back(entry.second);
  }
  std::sort(kept.begin(), kept.end());
  return Localize(head, tail, kept, InducedEdges(net, kept, mask), false);
}

DrugFlowSubgraph ExtractRandomSubgraph(const CombinedNetwork& net, NodeId head,
                                       NodeId tail, const ExtractionOptions& options,
                                       size_t sample_size, uint64_t seed) {
  if (head == tail) throw DataError("random subgraph of a self-pair is undefined");
  const PairMask mask{head, tail, options.mask_target_edges};
  const auto around_head = KHopNeighborhood(net, head, options.hops, mask);
  const auto around_tail = KHopNeighborhood(net, tail, options.hops, mask);
  std::vector<NodeId> pool;
  std::set_union(around_head.begin(), around_head.end(), around_tail.begin(),
                 around_tail.end(), std::back_inserter(pool));
  std::erase_if(pool, [&](NodeId v) { return v == head || v == tail; });
  std::seed_seq seq{seed, static_cast<uint64_t>(head), static_cast<uint64_t>(tail)};
  std::mt19937_64 rng(seq);
  std::vector<NodeId> sampled;
  std::sample(pool.begin(), pool.end(), std::back_inserter(sampled),
              std::min(sample_size, pool.size()), rng);
  sampled.push_back(head);
  sampled.push_back(tail);
  std::sort(sampled.begin(), sampled.end());
  return Localize(head, tail, sampled, InducedEdges(net, sampled, mask), false);
}

InducedSubgraph ToInduced(const DrugFlowSubgraph& subgraph) {
  InducedSubgraph out;
  out.nodes = subgraph.nodes;
  std::sort(out.nodes.begin(), out.nodes.end());
  for (const LocalEdge& e : subgraph.edges) {
    out.edges.push_back({subgraph.nodes[e.src], e.relation, subgraph.nodes[e.dst]});
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

void WriteSubgraphDump(std::ostream& out, const DrugFlowSubgraph& subgraph,
                       const Vocabularies& vocab) {
  out << "pair\t" << vocab.nodes.label(subgraph.head) << '\t'
      << vocab.nodes.label(subgraph.tail) << '\n';
  for (size_t i = 0; i < subgraph.nodes.size(); ++i) {
    out << "node\t" << i << '\t' << vocab.nodes.label(subgraph.nodes[i]) << '\n';
  }
  for (const LocalEdge& e : subgraph.edges) {
    out << "edge\t" << vocab.nodes.label(subgraph.nodes[e.src]) << '\t'
        << vocab.relations.label(e.relation) << '\t'
        << vocab.nodes.label(subgraph.nodes[e.dst]) << '\n';
  }
}

}  // namespace knowddi
