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

#include "knowddi/graph_store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "knowddi/errors.h"

namespace knowddi {

uint64_t Fnv1a64(std::string_view bytes, uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

uint32_t Vocabulary::Intern(std::string_view label) {
  auto it = index_.find(std::string(label));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<uint32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<uint32_t> Vocabulary::Find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

uint64_t Vocabulary::Digest() const {
  uint64_t h = Fnv1a64("vocab");
  for (const std::string& label : labels_) {
    h = Fnv1a64(label, h);
    h = Fnv1a64(std::string_view("\n", 1), h);
  }
  return h;
}

Vocabularies::Vocabularies() {
  relations.Intern(kIdentityLabel);
  relations.Intern(kResembleLabel);
}

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find('\t') != std::string_view::npos) {
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return fields;
  }
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

std::vector<FactTriplet> ParseTriples(std::istream& in, Vocabularies& vocab,
                                      std::string_view source_name) {
  std::vector<FactTriplet> triples;
  std::set<FactTriplet> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (IsBlank(view) || view.front() == '#') continue;
    const auto fields = SplitFields(view);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no
          << ": expected head<TAB>relation<TAB>tail, got " << fields.size()
          << " field(s)";
      throw DataError(msg.str());
    }
    if (fields[1] == kIdentityLabel || fields[1] == kResembleLabel) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": relation '" << fields[1]
          << "' is reserved";
      throw DataError(msg.str());
    }
    FactTriplet t{vocab.nodes.Intern(fields[0]), vocab.relations.Intern(fields[1]),
                  vocab.nodes.Intern(fields[2])};
    if (seen.insert(t).second) triples.push_back(t);
  }
  return triples;
}

std::vector<FactTriplet> LoadTriples(const std::filesystem::path& path,
                                     Vocabularies& vocab) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open triple file: " + path.string());
  return ParseTriples(in, vocab, path.string());
}

void WriteTriples(const std::filesystem::path& path,
                  std::span<const FactTriplet> triples,
                  const Vocabularies& vocab) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write triple file: " + path.string());
  for (const FactTriplet& t : triples) {
    out << vocab.nodes.label(t.head) << '\t' << vocab.relations.label(t.relation)
        << '\t' << vocab.nodes.label(t.tail) << '\n';
  }
}

std::vector<FactTriplet> RemoveDrugDrugEdges(std::span<const FactTriplet> kg,
                                             std::span<const FactTriplet> ddi) {
  std::set<NodeId> drugs;
  for (const FactTriplet& t : ddi) {
    drugs.insert(t.head);
    drugs.insert(t.tail);
  }
  std::vector<FactTriplet> kept;
  kept.reserve(kg.size());
  for (const FactTriplet& t : kg) {
    if (drugs.count(t.head) && drugs.count(t.tail)) continue;
    kept.push_back(t);
  }
  return kept;
}

CombinedNetwork CombinedNetwork::Build(Vocabularies vocab,
                                       std::span<const FactTriplet> ddi_all,
                                       std::span<const FactTriplet> ddi_train,
                                       std::span<const FactTriplet> kg) {
  CombinedNetwork net;
  const size_t n = vocab.nodes.size();
  const size_t num_rel = vocab.relations.size();
  auto check = [&](const FactTriplet& t) {
    if (t.head >= n || t.tail >= n || t.relation >= num_rel) {
      throw DataError("triple references an id outside the vocabulary");
    }
    if (t.relation == kIdentityRelation || t.relation == kResembleRelation) {
      throw DataError("reserved relation used by a loaded edge");
    }
  };

  net.is_drug_.assign(n, false);
  std::set<RelationId> ddi_rel;
  for (const FactTriplet& t : ddi_all) {
    check(t);
    net.is_drug_[t.head] = true;
    net.is_drug_[t.tail] = true;
    ddi_rel.insert(t.relation);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (net.is_drug_[v]) net.drug_nodes_.push_back(v);
  }
  net.ddi_relations_.assign(ddi_rel.begin(), ddi_rel.end());
  net.class_of_relation_.assign(num_rel, -1);
  for (size_t i = 0; i < net.ddi_relations_.size(); ++i) {
    net.class_of_relation_[net.ddi_relations_[i]] = static_cast<int32_t>(i);
  }

  std::set<FactTriplet> edges;
  for (const FactTriplet& t : ddi_train) {
    check(t);
    edges.insert(t);
  }
  for (const FactTriplet& t : kg) {
    check(t);
    if (net.is_drug_[t.head] && net.is_drug_[t.tail]) {
      ++net.kg_edges_removed_;
      continue;
    }
    edges.insert(t);
  }
  net.edges_.assign(edges.begin(), edges.end());

  // CSR adjacency in both directions.
  net.out_offsets_.assign(n + 1, 0);
  net.in_offsets_.assign(n + 1, 0);
  for (const FactTriplet& t : net.edges_) {
    ++net.out_offsets_[t.head + 1];
    ++net.in_offsets_[t.tail + 1];
  }
  std::partial_sum(net.out_offsets_.begin(), net.out_offsets_.end(),
                   net.out_offsets_.begin());
  std::partial_sum(net.in_offsets_.begin(), net.in_offsets_.end(),
                   net.in_offsets_.begin());
  net.out_adj_.resize(net.edges_.size());
  net.in_adj_.resize(net.edges_.size());
  std::vector<uint32_t> out_fill(net.out_offsets_.begin(), net.out_offsets_.end() - 1);
  std::vector<uint32_t> in_fill(net.in_offsets_.begin(), net.in_offsets_.end() - 1);
  for (const FactTriplet& t : net.edges_) {
    net.out_adj_[out_fill[t.head]++] = Neighbor{t.tail, t.relation};
    net.in_adj_[in_fill[t.tail]++] = Neighbor{t.head, t.relation};
  }
  for (NodeId v = 0; v < n; ++v) {
    std::sort(net.out_adj_.begin() + net.out_offsets_[v],
              net.out_adj_.begin() + net.out_offsets_[v + 1]);
    std::sort(net.in_adj_.begin() + net.in_offsets_[v],
              net.in_adj_.begin() + net.in_offsets_[v + 1]);
  }
  net.vocab_ = std::move(vocab);
  return net;
}

std::span<const Neighbor> CombinedNetwork::neighbors(NodeId node,
                                                     Direction direction) const {
  if (node >= num_nodes()) {
    throw DataError("invalid node id " + std::to_string(node));
  }
  if (direction == Direction::kOut) {
    return std::span<const Neighbor>(out_adj_).subspan(
        out_offsets_[node], out_offsets_[node + 1] - out_offsets_[node]);
  }
  return std::span<const Neighbor>(in_adj_).subspan(
      in_offsets_[node], in_offsets_[node + 1] - in_offsets_[node]);
}

bool CombinedNetwork::HasEdge(NodeId head, RelationId relation, NodeId tail) const {
  if (head >= num_nodes()) return false;
  const auto out = neighbors(head, Direction::kOut);
  return std::binary_search(out.begin(), out.end(), Neighbor{tail, relation});
}

std::optional<size_t> CombinedNetwork::ClassIndex(RelationId relation) const {
  if (relation >= class_of_relation_.size() || class_of_relation_[relation] < 0) {
    return std::nullopt;
  }
  return static_cast<size_t>(class_of_relation_[relation]);
}

std::string CombinedNetwork::CanonicalSerialization() const {
  std::ostringstream out;
  out << "nodes " << vocab_.nodes.size() << "\n";
  for (const auto& label : vocab_.nodes.labels()) out << label << "\n";
  out << "relations " << vocab_.relations.size() << "\n";
  for (const auto& label : vocab_.relations.labels()) out << label << "\n";
  out << "drugs";
  for (NodeId d : drug_nodes_) out << ' ' << d;
  out << "\nddi_relations";
  for (RelationId r : ddi_relations_) out << ' ' << r;
  out << "\nedges " << edges_.size() << "\n";
  for (NodeId v = 0; v < num_nodes(); ++v) {
    for (const Neighbor& nb : neighbors(v, Direction::kOut)) {
      out << v << ' ' << nb.relation << ' ' << nb.node << "\n";
    }
  }
  return out.str();
}

SplitSet SplitDdi(std::vector<FactTriplet> triples, const SplitRatios& ratios,
                  uint64_t seed) {
  if (ratios.train <= 0 || ratios.valid <= 0 || ratios.test <= 0) {
    throw DataError("split ratios must be positive");
  }
  if (triples.size() < 3) {
    throw DataError("need at least 3 DDI triples to split, got " +
                    std::to_string(triples.size()));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(triples.begin(), triples.end(), rng);
  const double total = ratios.train + ratios.valid + ratios.test;
  const auto n = static_cast<double>(triples.size());
  const auto n_valid = static_cast<size_t>(std::floor(n * ratios.valid / total));
  const auto n_test = static_cast<size_t>(std::floor(n * ratios.test / total));
  const size_t n_train = triples.size() - n_valid - n_test;
  SplitSet split;
  split.train.assign(triples.begin(), triples.begin() + n_train);
  split.valid.assign(triples.begin() + n_train, triples.begin() + n_train + n_valid);
  split.test.assign(triples.begin() + n_train + n_valid, triples.end());
  return split;
}

std::vector<FactTriplet> FilterRelationsByRank(std::span<const FactTriplet> triples,
                                               size_t rank_begin, size_t rank_end) {
  std::map<RelationId, size_t> counts;
  for (const FactTriplet& t : triples) ++counts[t.relation];
  std::vector<std::pair<RelationId, size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<RelationId> keep;
  for (size_t i = rank_begin; i < std::min(rank_end, ranked.size()); ++i) {
    keep.insert(ranked[i].first);
  }
  std::vector<FactTriplet> out;
  for (const FactTriplet& t : triples) {
    if (keep.count(t.relation)) out.push_back(t);
  }
  return out;
}

std::vector<FactTriplet> KeepOneRelationPerPair(std::span<const FactTriplet> triples) {
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<FactTriplet> out;
  for (const FactTriplet& t : triples) {
    if (seen.insert({t.head, t.tail}).second) out.push_back(t);
  }
  return out;
}

std::vector<FactTriplet> SampleFraction(std::span<const FactTriplet> triples,
                                        double fraction, uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw DataError("sample fraction must lie in [0, 1]");
  }
  const auto keep = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(triples.size())));
  std::vector<size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(keep);
  std::sort(order.begin(), order.end());
  std::vector<FactTriplet> out;
  out.reserve(keep);
  for (size_t i : order) out.push_back(triples[i]);
  return out;
}

}  // namespace knowddi
