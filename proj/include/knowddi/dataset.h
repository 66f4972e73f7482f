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

#ifndef KNOWDDI_DATASET_H_
#define KNOWDDI_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "knowddi/graph_store.h"

namespace knowddi {

// DDI splits plus the combined network built from the training split.
struct Dataset {
  CombinedNetwork network;
  std::vector<FactTriplet> train;
  std::vector<FactTriplet> valid;
  std::vector<FactTriplet> test;
  size_t kg_triples = 0;  // KG triples offered to the network after sampling
};

// `kg_fraction` < 1 keeps a seeded sample of the KG triples.
Dataset BuildDataset(Vocabularies vocab, SplitSet split, std::span<const FactTriplet> kg,
                     double kg_fraction = 1.0, uint64_t seed = 0);

// Reads train.tsv, valid.tsv, test.tsv and kg.tsv (in that order, so node
// and relation ids are reproducible).
Dataset LoadDataset(const std::filesystem::path& dir, double kg_fraction = 1.0,
                    uint64_t seed = 0);

// Writes the four split files and a key=value manifest.txt.
void WriteDataset(const std::filesystem::path& dir, const Vocabularies& vocab,
                  const SplitSet& split, std::span<const FactTriplet> kg,
                  const std::map<std::string, std::string>& manifest);

struct PreprocessOptions {
  std::filesystem::path ddi_path;
  std::filesystem::path kg_path;
  uint64_t seed = 0;
  // Keep DDI relations ranked [rank_begin, rank_end) by frequency.
  size_t rank_begin = 0;
  size_t rank_end = std::numeric_limits<size_t>::max();
  bool one_relation_per_pair = false;
  SplitRatios ratios;
};

struct PreprocessSummary {
  size_t ddi_triples = 0;
  size_t kg_triples = 0;
  size_t kg_removed = 0;
  size_t train = 0, valid = 0, test = 0;
};

// Filter, split and leakage-filter raw triples into a dataset directory.
PreprocessSummary Preprocess(const PreprocessOptions& options,
                             const std::filesystem::path& out_dir);

// Planted two-hop rule: drug h binds gene g with binds_a, g regulates drug t
// with regulates_b, and the pair (h, t) interacts with relation ddi_{2a+b}
// whenever exactly one such path joins them. Classes are balanced by
// subsampling.
struct SyntheticOptions {
  size_t drugs = 50;
  size_t genes = 200;
  size_t binds_per_drug = 4;
  size_t regulated_per_gene = 1;
  // Gene-gene noise edges per gene.
  size_t gene_links_per_gene = 1;
  uint64_t seed = 7;
};

struct SyntheticData {
  Vocabularies vocab;
  std::vector<FactTriplet> ddi;
  std::vector<FactTriplet> kg;
};

SyntheticData GenerateSynthetic(const SyntheticOptions& options);

}  // namespace knowddi

#endif  // KNOWDDI_DATASET_H_
