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

#ifndef KNOWDDI_GRAPH_STORE_H_
#define KNOWDDI_GRAPH_STORE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace knowddi {

using NodeId = uint32_t;
using RelationId = uint32_t;

// Reserved relations occupy the first two relation ids of every vocabulary.
inline constexpr RelationId kIdentityRelation = 0;
inline constexpr RelationId kResembleRelation = 1;
inline constexpr std::string_view kIdentityLabel = "__identity__";
inline constexpr std::string_view kResembleLabel = "__resemble__";

// Dense ids in first-seen order.
class Vocabulary {
 public:
  uint32_t Intern(std::string_view label);
  std::optional<uint32_t> Find(std::string_view label) const;
  const std::string& label(uint32_t id) const { return labels_.at(id); }
  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  uint64_t Digest() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, uint32_t> index_;
};

struct Vocabularies {
  Vocabularies();
  Vocabulary nodes;
  Vocabulary relations;
};

struct FactTriplet {
  NodeId head = 0;
  RelationId relation = 0;
  NodeId tail = 0;

  auto operator<=>(const FactTriplet&) const = default;
};

// Parses tab-separated head/relation/tail lines, interning labels. Blank
// lines and '#' comments are skipped; exact duplicates are dropped. Lines
// without tabs fall back to whitespace splitting.
std::vector<FactTriplet> ParseTriples(std::istream& in, Vocabularies& vocab,
                                      std::string_view source_name);
std::vector<FactTriplet> LoadTriples(const std::filesystem::path& path,
                                     Vocabularies& vocab);
void WriteTriples(const std::filesystem::path& path,
                  std::span<const FactTriplet> triples,
                  const Vocabularies& vocab);

struct Neighbor {
  NodeId node = 0;
  RelationId relation = 0;

  auto operator<=>(const Neighbor&) const = default;
};

enum class Direction { kIn, kOut };

// Immutable union of the training DDI graph and the leakage-filtered KG.
// Safe to share across reader threads.
class CombinedNetwork {
 public:
  // `ddi_all` identifies drug nodes and DDI relations (all splits);
  // `ddi_train` contributes edges. KG edges joining two drug nodes are
  // dropped before the merge.
  static CombinedNetwork Build(Vocabularies vocab,
                               std::span<const FactTriplet> ddi_all,
                               std::span<const FactTriplet> ddi_train,
                               std::span<const FactTriplet> kg);

  size_t num_nodes() const { return vocab_.nodes.size(); }
  size_t num_relations() const { return vocab_.relations.size(); }
  const Vocabularies& vocab() const { return vocab_; }

  // Sorted by (neighbor, relation). Throws DataError for an invalid node.
  std::span<const Neighbor> neighbors(NodeId node, Direction direction) const;
  // All edges, sorted by (head, relation, tail).
  std::span<const FactTriplet> edges() const { return edges_; }
  bool HasEdge(NodeId head, RelationId relation, NodeId tail) const;
  bool IsDrug(NodeId node) const { return node < is_drug_.size() && is_drug_[node]; }
  const std::vector<NodeId>& drug_nodes() const { return drug_nodes_; }
  // Sorted DDI relation ids; class index = position in this list.
  const std::vector<RelationId>& ddi_relations() const { return ddi_relations_; }
  std::optional<size_t> ClassIndex(RelationId relation) const;
  bool IsDdiRelation(RelationId relation) const { return ClassIndex(relation).has_value(); }
  size_t num_classes() const { return ddi_relations_.size(); }
  size_t num_kg_edges_removed() const { return kg_edges_removed_; }

  // Deterministic text rendering of vocabularies and adjacency.
  std::string CanonicalSerialization() const;

 private:
  Vocabularies vocab_;
  std::vector<FactTriplet> edges_;
  std::vector<uint32_t> out_offsets_, in_offsets_;
  std::vector<Neighbor> out_adj_, in_adj_;
  std::vector<bool> is_drug_;
  std::vector<NodeId> drug_nodes_;
  std::vector<RelationId> ddi_relations_;
  std::vector<int32_t> class_of_relation_;
  size_t kg_edges_removed_ = 0;
};

// KG triples whose endpoints are both drugs (leakage edges) are removed.
std::vector<FactTriplet> RemoveDrugDrugEdges(std::span<const FactTriplet> kg,
                                             std::span<const FactTriplet> ddi);

struct SplitRatios {
  double train = 7.0;
  double valid = 1.0;
  double test = 2.0;
};

struct SplitSet {
  std::vector<FactTriplet> train, valid, test;
};

// Seeded shuffle, then valid = floor(n * valid / total),
// test = floor(n * test / total), train takes the remainder.
SplitSet SplitDdi(std::vector<FactTriplet> triples, const SplitRatios& ratios,
                  uint64_t seed);

// Keeps relations whose rank by decreasing triple count (ties by id) lies
// in [rank_begin, rank_end).
std::vector<FactTriplet> FilterRelationsByRank(std::span<const FactTriplet> triples,
                                               size_t rank_begin, size_t rank_end);
// First relation seen for each ordered (head, tail) pair.
std::vector<FactTriplet> KeepOneRelationPerPair(std::span<const FactTriplet> triples);
// Keeps a seeded uniform sample of round(fraction * n) triples, order preserved.
std::vector<FactTriplet> SampleFraction(std::span<const FactTriplet> triples,
                                        double fraction, uint64_t seed);

uint64_t Fnv1a64(std::string_view bytes, uint64_t hash = 1469598103934665603ULL);

}  // namespace knowddi

#endif  // KNOWDDI_GRAPH_STORE_H_
