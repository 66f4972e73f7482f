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

#ifndef KNOWDDI_EXPLAIN_H_
#define KNOWDDI_EXPLAIN_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "knowddi/graph_store.h"
#include "knowddi/knowledge_subgraph.h"

namespace knowddi {

struct PathHop {
  uint32_t src = 0;  // local indices
  uint32_t dst = 0;
  RelationId relation = 0;
  double strength = 0.0;
};

struct ExplainingPath {
  std::vector<uint32_t> nodes;  // local indices, head first, tail last
  std::vector<PathHop> hops;
  double avg_strength = 0.0;
};

struct ExplainOptions {
  int max_path_length = 4;
  size_t max_paths = 20;
  // Pad paths to max_path_length with the tail's identity self-loop and
  // count those hops in the average. Otherwise identity hops are skipped.
  bool pad_identity = false;
};

// Simple head -> tail paths over edges of positive strength, ranked by
// average hop strength (descending), then length, then node ids.
std::vector<ExplainingPath> EnumerateExplainingPaths(const KnowledgeSubgraph& ks,
                                                     const ExplainOptions& options);

// Tab-separated: rank, avg_strength, then alternating node and relation labels.
void WritePathReport(std::ostream& out, const KnowledgeSubgraph& ks,
                     std::span<const ExplainingPath> paths, const Vocabularies& vocab);

struct DotStyle {
  double max_penwidth = 5.0;
  bool show_strength_labels = true;
};

// Digraph of the positive-strength edges. Pen width scales with strength,
// resemble edges are dotted, head and tail are filled, and edges on a
// listed path are coloured.
std::string ExportDot(const KnowledgeSubgraph& ks, std::span<const ExplainingPath> paths,
                      const Vocabularies& vocab, const DotStyle& style = {});

}  // namespace knowddi

#endif  // KNOWDDI_EXPLAIN_H_
