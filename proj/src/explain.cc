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

#include "knowddi/explain.h"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace knowddi {
namespace {

struct Arc {
  uint32_t dst;
  RelationId relation;
  double strength;
};

std::string Quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::vector<NodeId> GlobalIds(const KnowledgeSubgraph& ks, const ExplainingPath& p) {
  std::vector<NodeId> ids;
  for (uint32_t local : p.nodes) ids.push_back(ks.base.nodes[local]);
  return ids;
}

}  // namespace

std::vector<ExplainingPath> EnumerateExplainingPaths(const KnowledgeSubgraph& ks,
                                                     const ExplainOptions& options) {
  const size_t n = ks.base.size();
  if (n < 2) return {};
  constexpr uint32_t kHead = 0, kTail = 1;
  std::vector<std::vector<Arc>> out(n);
  double tail_identity = 0.0;
  for (const StrengthEntry& e : ks.Edges()) {
    if (e.src == e.dst) {
      if (e.src == kTail && e.relation == kIdentityRelation) tail_identity = e.strength;
      continue;
    }
    out[e.src].push_back({e.dst, e.relation, e.strength});
  }

  std::vector<ExplainingPath> found;
  std::vector<bool> on_path(n, false);
  ExplainingPath current;
  current.nodes.push_back(kHead);
  on_path[kHead] = true;
  const auto limit = static_cast<size_t>(std::max(0, options.max_path_length));

  auto record = [&]() {
    ExplainingPath p = current;
    if (options.pad_identity && tail_identity > 0.0) {
      while (p.hops.size() < limit) {
        p.hops.push_back({kTail, kTail, kIdentityRelation, tail_identity});
        p.nodes.push_back(kTail);
      }
    }
    double sum = 0.0;
    size_t counted = 0;
    for (const PathHop& hop : p.hops) {
      if (!options.pad_identity && hop.relation == kIdentityRelation) continue;
      sum += hop.strength;
      ++counted;
    }
    p.avg_strength = counted == 0 ? 0.0 : sum / static_cast<double>(counted);
    found.push_back(std::move(p));
  };

  auto dfs = [&](auto&& self, uint32_t u) -> void {
    if (u == kTail) {
      record();
      return;
    }
    if (current.hops.size() >= limit) return;
    for (const Arc& arc : out[u]) {
      if (on_path[arc.dst]) continue;
      on_path[arc.dst] = true;
      current.nodes.push_back(arc.dst);
      current.hops.push_back({u, arc.dst, arc.relation, arc.strength});
      self(self, arc.dst);
      current.hops.pop_back();
      current.nodes.pop_back();
      on_path[arc.dst] = false;
    }
  };
  dfs(dfs, kHead);

  auto key = [&](const ExplainingPath& p) {
    std::vector<RelationId> rels;
    for (const PathHop& hop : p.hops) rels.push_back(hop.relation);
    return std::make_tuple(-p.avg_strength, p.hops.size(), GlobalIds(ks, p), rels);
  };
  std::stable_sort(found.begin(), found.end(),
                   [&](const ExplainingPath& a, const ExplainingPath& b) {
                     return key(a) < key(b);
                   });
  if (found.size() > options.max_paths) found.resize(options.max_paths);
  return found;
}

void WritePathReport(std::ostream& out, const KnowledgeSubgraph& ks,
                     std::span<const ExplainingPath> paths, const Vocabularies& vocab) {
  for (size_t i = 0; i < paths.size(); ++i) {
    const ExplainingPath& p = paths[i];
    out << i + 1 << '\t' << std::setprecision(6) << p.avg_strength << '\t'
        << vocab.nodes.label(ks.base.nodes[p.nodes.front()]);
    for (const PathHop& hop : p.hops) {
      out << '\t' << vocab.relations.label(hop.relation) << '\t'
          << vocab.nodes.label(ks.base.nodes[hop.dst]);
    }
    out << '\n';
  }
}

std::string ExportDot(const KnowledgeSubgraph& ks, std::span<const ExplainingPath> paths,
                      const Vocabularies& vocab, const DotStyle& style) {
  std::set<std::tuple<uint32_t, uint32_t, RelationId>> highlighted;
  for (const ExplainingPath& p : paths) {
    for (const PathHop& hop : p.hops) highlighted.emplace(hop.src, hop.dst, hop.relation);
  }
  std::ostringstream dot;
  dot << std::setprecision(4);
  dot << "digraph knowledge_subgraph {\n";
  dot << "  rankdir=LR;\n";
  dot << "  node [shape=ellipse, fontname=\"Helvetica\"];\n";
  for (size_t i = 0; i < ks.base.size(); ++i) {
    dot << "  n" << i << " [label=" << Quote(vocab.nodes.label(ks.base.nodes[i]));
    if (i == 0) dot << ", shape=box, style=filled, fillcolor=\"#f4a582\", xlabel=\"head\"";
    if (i == 1) dot << ", shape=box, style=filled, fillcolor=\"#92c5de\", xlabel=\"tail\"";
    dot << "];\n";
  }
  for (const StrengthEntry& e : ks.Edges()) {
    if (e.src == e.dst && e.relation == kResembleRelation) continue;
    const double width = std::max(0.1, style.max_penwidth * std::min(1.0, e.strength));
    dot << "  n" << e.src << " -> n" << e.dst << " [label="
        << Quote(style.show_strength_labels
                     ? vocab.relations.label(e.relation) + " (" +
                           (std::ostringstream() << std::setprecision(3) << e.strength).str() +
                           ")"
                     : vocab.relations.label(e.relation))
        << ", penwidth=" << width;
    if (e.relation == kResembleRelation) dot << ", style=dotted";
    if (highlighted.contains({e.src, e.dst, e.relation})) dot << ", color=\"#b2182b\"";
    dot << "];\n";
  }
  dot << "}\n";
  return dot.str();
}

}  // namespace knowddi
