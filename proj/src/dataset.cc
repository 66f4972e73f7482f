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

#include "knowddi/dataset.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "knowddi/errors.h"

namespace knowddi {

namespace fs = std::filesystem;

Dataset BuildDataset(Vocabularies vocab, SplitSet split, std::span<const FactTriplet> kg,
                     double kg_fraction, uint64_t seed) {
  std::vector<FactTriplet> kept(kg.begin(), kg.end());
  if (kg_fraction < 1.0) kept = SampleFraction(kept, kg_fraction, seed);
  std::vector<FactTriplet> all = split.train;
  all.insert(all.end(), split.valid.begin(), split.valid.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  Dataset data{CombinedNetwork::Build(std::move(vocab), all, split.train, kept),
               std::move(split.train), std::move(split.valid), std::move(split.test),
               kept.size()};
  return data;
}

Dataset LoadDataset(const fs::path& dir, double kg_fraction, uint64_t seed) {
  Vocabularies vocab;
  SplitSet split;
  split.train = LoadTriples(dir / "train.tsv", vocab);
  split.valid = LoadTriples(dir / "valid.tsv", vocab);
  split.test = LoadTriples(dir / "test.tsv", vocab);
  std::vector<FactTriplet> kg;
  if (fs::exists(dir / "kg.tsv")) kg = LoadTriples(dir / "kg.tsv", vocab);
  if (split.train.empty()) throw DataError("empty training split in " + dir.string());
  return BuildDataset(std::move(vocab), std::move(split), kg, kg_fraction, seed);
}

void WriteDataset(const fs::path& dir, const Vocabularies& vocab, const SplitSet& split,
                  std::span<const FactTriplet> kg,
                  const std::map<std::string, std::string>& manifest) {
  fs::create_directories(dir);
  WriteTriples(dir / "train.tsv", split.train, vocab);
  WriteTriples(dir / "valid.tsv", split.valid, vocab);
  WriteTriples(dir / "test.tsv", split.test, vocab);
  WriteTriples(dir / "kg.tsv", kg, vocab);
  std::ofstream out(dir / "manifest.txt");
  for (const auto& [key, value] : manifest) out << key << '=' << value << '\n';
  if (!out) throw DataError("cannot write " + (dir / "manifest.txt").string());
}

PreprocessSummary Preprocess(const PreprocessOptions& options, const fs::path& out_dir) {
  Vocabularies vocab;
  std::vector<FactTriplet> ddi = LoadTriples(options.ddi_path, vocab);
  std::vector<FactTriplet> kg;
  if (!options.kg_path.empty()) kg = LoadTriples(options.kg_path, vocab);
  ddi = FilterRelationsByRank(ddi, options.rank_begin, options.rank_end);
  if (options.one_relation_per_pair) ddi = KeepOneRelationPerPair(ddi);
  PreprocessSummary summary;
  summary.ddi_triples = ddi.size();
  const std::vector<FactTriplet> filtered = RemoveDrugDrugEdges(kg, ddi);
  summary.kg_removed = kg.size() - filtered.size();
  summary.kg_triples = filtered.size();
  SplitSet split = SplitDdi(std::move(ddi), options.ratios, options.seed);
  summary.train = split.train.size();
  summary.valid = split.valid.size();
  summary.test = split.test.size();
  WriteDataset(out_dir, vocab, split, filtered,
               {{"source_ddi", options.ddi_path.string()},
                {"source_kg", options.kg_path.string()},
                {"seed", std::to_string(options.seed)},
                {"kg_removed", std::to_string(summary.kg_removed)},
                {"train", std::to_string(summary.train)},
                {"valid", std::to_string(summary.valid)},
                {"test", std::to_string(summary.test)}});
  return summary;
}

SyntheticData GenerateSynthetic(const SyntheticOptions& options) {
  if (options.drugs < 2 || options.genes < 1) throw DataError("synthetic graph too small");
  std::mt19937_64 rng(options.seed);
  SyntheticData data;
  Vocabulary& nodes = data.vocab.nodes;
  Vocabulary& rels = data.vocab.relations;
  std::vector<NodeId> drugs, genes;
  for (size_t i = 0; i < options.drugs; ++i) drugs.push_back(nodes.Intern("drug" + std::to_string(i)));
  for (size_t i = 0; i < options.genes; ++i) genes.push_back(nodes.Intern("gene" + std::to_string(i)));
  const RelationId binds[2] = {rels.Intern("binds_0"), rels.Intern("binds_1")};
  const RelationId regulates[2] = {rels.Intern("regulates_0"), rels.Intern("regulates_1")};
  const RelationId link = rels.Intern("links");
  RelationId ddi[4];
  for (int c = 0; c < 4; ++c) ddi[c] = rels.Intern("ddi_" + std::to_string(c));

  std::bernoulli_distribution coin(0.5);
  std::set<FactTriplet> kg;
  for (NodeId d : drugs) {
    std::vector<NodeId> picked;
    std::sample(genes.begin(), genes.end(), std::back_inserter(picked),
                options.binds_per_drug, rng);
    for (NodeId g : picked) kg.insert({d, binds[coin(rng)], g});
  }
  for (NodeId g : genes) {
    std::vector<NodeId> picked;
    std::sample(drugs.begin(), drugs.end(), std::back_inserter(picked),
                options.regulated_per_gene, rng);
    for (NodeId d : picked) kg.insert({g, regulates[coin(rng)], d});
    std::uniform_int_distribution<size_t> pick(0, genes.size() - 1);
    for (size_t k = 0; k < options.gene_links_per_gene; ++k) {
      const NodeId other = genes[pick(rng)];
      if (other != g) kg.insert({g, link, other});
    }
  }

  // Two-hop paths drug -binds-> gene -regulates-> drug.
  std::map<std::pair<NodeId, NodeId>, std::vector<int>> paths;
  std::map<NodeId, std::vector<std::pair<NodeId, int>>> regulated_by_gene;
  for (const FactTriplet& t : kg) {
    if (t.relation == regulates[0] || t.relation == regulates[1]) {
      regulated_by_gene[t.head].emplace_back(t.tail, t.relation == regulates[1] ? 1 : 0);
    }
  }
  for (const FactTriplet& t : kg) {
    if (t.relation != binds[0] && t.relation != binds[1]) continue;
    const int a = t.relation == binds[1] ? 1 : 0;
    for (const auto& [target, b] : regulated_by_gene[t.tail]) {
      if (target != t.head) paths[{t.head, target}].push_back(2 * a + b);
    }
  }
  std::vector<FactTriplet> by_class[4];
  for (const auto& [pair, labels] : paths) {
    if (labels.size() != 1) continue;
    by_class[labels[0]].push_back({pair.first, ddi[labels[0]], pair.second});
  }
  size_t per_class = by_class[0].size();
  for (const auto& c : by_class) per_class = std::min(per_class, c.size());
  for (auto& c : by_class) {
    std::shuffle(c.begin(), c.end(), rng);
    c.resize(per_class);
    data.ddi.insert(data.ddi.end(), c.begin(), c.end());
  }
  std::sort(data.ddi.begin(), data.ddi.end());
  data.kg.assign(kg.begin(), kg.end());
  return data;
}

}  // namespace knowddi
