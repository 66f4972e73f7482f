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

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "knowddi/explain.h"

namespace knowddi {
namespace {

// Recursive-descent checker for the DOT language (graph, statements,
// attribute lists, quoted and bare identifiers). Subgraph blocks and ports are
// not produced by the exporter and are rejected here.
class DotChecker {
 public:
  explicit DotChecker(std::string text) : text_(std::move(text)) {}

  bool Valid(std::string* error) {
    try {
      Tokenize();
      Graph();
      return true;
    } catch (const std::runtime_error& e) {
      *error = e.what();
      return false;
    }
  }

 private:
  enum Kind { kId, kPunct };
  struct Token {
    Kind kind;
    std::string text;
  };

  void Tokenize() {
    size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
        while (i < text_.size() && text_[i] != '\n') ++i;
      } else if (c == '"') {
        std::string s;
        ++i;
        while (true) {
          if (i >= text_.size()) throw std::runtime_error("unterminated string");
          if (text_[i] == '\\' && i + 1 < text_.size()) {
            s += text_.substr(i, 2);
            i += 2;
            continue;
          }
          if (text_[i] == '"') break;
          if (text_[i] == '\n') throw std::runtime_error("newline in string");
          s += text_[i++];
        }
        ++i;
        tokens_.push_back({kId, '"' + s + '"'});
      } else if (c == '-' && i + 1 < text_.size() && (text_[i + 1] == '>' || text_[i + 1] == '-')) {
        tokens_.push_back({kPunct, text_.substr(i, 2)});
        i += 2;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
          ++j;
        }
        tokens_.push_back({kId, text_.substr(i, j - i)});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
        size_t j = i + 1;
        bool dot = c == '.';
        while (j < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[j])) ||
                                    (text_[j] == '.' && !dot))) {
          dot = dot || text_[j] == '.';
          ++j;
        }
        const std::string num = text_.substr(i, j - i);
        if (num == "-" || num == "." || num == "-.") throw std::runtime_error("bad numeral");
        tokens_.push_back({kId, num});
        i = j;
      } else if (std::string("{}[]=;,").find(c) != std::string::npos) {
        tokens_.push_back({kPunct, std::string(1, c)});
        ++i;
      } else {
        throw std::runtime_error(std::string("unexpected character '") + c + "'");
      }
    }
  }

  const Token* Peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
  bool IsPunct(const char* p) const {
    const Token* t = Peek();
    return t && t->kind == kPunct && t->text == p;
  }
  bool IsId() const {
    const Token* t = Peek();
    return t && t->kind == kId;
  }
  bool IsKeyword(const char* k) const {
    const Token* t = Peek();
    if (!t || t->kind != kId) return false;
    std::string lower = t->text;
    for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return lower == k;
  }
  void Expect(const char* p) {
    if (!IsPunct(p)) throw std::runtime_error(std::string("expected '") + p + "'");
    ++pos_;
  }
  void ExpectId() {
    if (!IsId() || IsKeyword("node") || IsKeyword("edge") || IsKeyword("graph") ||
        IsKeyword("digraph") || IsKeyword("subgraph") || IsKeyword("strict")) {
      throw std::runtime_error("expected identifier");
    }
    ++pos_;
  }

  void Graph() {
    if (IsKeyword("strict")) ++pos_;
    if (IsKeyword("digraph")) {
      directed_ = true;
    } else if (!IsKeyword("graph")) {
      throw std::runtime_error("expected graph or digraph");
    }
    ++pos_;
    if (IsId()) ExpectId();
    Expect("{");
    StatementList();
    Expect("}");
    if (pos_ != tokens_.size()) throw std::runtime_error("trailing tokens");
  }

  void StatementList() {
    while (!IsPunct("}")) {
      if (!Peek()) throw std::runtime_error("unexpected end of input");
      Statement();
      if (IsPunct(";")) ++pos_;
    }
  }

  void Statement() {
    if (IsKeyword("graph") || IsKeyword("node") || IsKeyword("edge")) {
      ++pos_;
      AttrList();
      return;
    }
    ExpectId();
    if (IsPunct("=")) {
      ++pos_;
      ExpectId();
      return;
    }
    bool edge = false;
    while (IsPunct("->") || IsPunct("--")) {
      if (IsPunct("->") != directed_) throw std::runtime_error("edge operator mismatch");
      ++pos_;
      ExpectId();
      edge = true;
    }
    (void)edge;
    if (IsPunct("[")) AttrList();
  }

  void AttrList() {
    while (IsPunct("[")) {
      ++pos_;
      while (!IsPunct("]")) {
        ExpectId();
        Expect("=");
        ExpectId();
        if (IsPunct(",") || IsPunct(";")) ++pos_;
      }
      Expect("]");
    }
  }

  std::string text_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  bool directed_ = false;
};

bool ValidDot(const std::string& text) {
  std::string error;
  const bool ok = DotChecker(text).Valid(&error);
  EXPECT_TRUE(ok) << error << "\n" << text;
  return ok;
}

TEST(DotCheckerTest, RejectsMalformedInput) {
  std::string error;
  EXPECT_FALSE(DotChecker("digraph { a -> }").Valid(&error));
  EXPECT_FALSE(DotChecker("digraph { a -- b }").Valid(&error));
  EXPECT_FALSE(DotChecker("digraph { a [label=\"x] }").Valid(&error));
  EXPECT_FALSE(DotChecker("digraph { a [label=] }").Valid(&error));
  EXPECT_FALSE(DotChecker("digraph { a }}").Valid(&error));
  EXPECT_TRUE(DotChecker("digraph g { a -> b [penwidth=2.5]; x = y; }").Valid(&error));
}

struct Fixture {
  Vocabularies vocab;
  KnowledgeSubgraph ks;
};

// Nodes "h", "t", then "a", "b", ...; relations "binds", "causes".
Fixture MakeFixture(size_t n) {
  Fixture f;
  for (size_t i = 0; i < n; ++i) {
    f.vocab.nodes.Intern(i == 0 ? "h" : i == 1 ? "t" : std::string(1, char('a' + i - 2)));
  }
  f.vocab.relations.Intern("binds");
  f.vocab.relations.Intern("causes");
  for (size_t i = 0; i < n; ++i) f.ks.base.nodes.push_back(static_cast<NodeId>(i));
  f.ks.base.head = 0;
  f.ks.base.tail = 1;
  return f;
}

void AddEntry(KnowledgeSubgraph& ks, uint32_t u, uint32_t v, RelationId r, double a) {
  ks.entries.push_back({u, v, r, r != kResembleRelation, a, a});
}

TEST(ExplainTest, ChainAveragesStrengths) {
  Fixture f = MakeFixture(3);
  AddEntry(f.ks, 0, 2, 2, 0.4);
  AddEntry(f.ks, 2, 1, 3, 0.6);
  const auto paths = EnumerateExplainingPaths(f.ks, {});
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_DOUBLE_EQ(paths[0].avg_strength, 0.5);
  EXPECT_EQ(paths[0].nodes, (std::vector<uint32_t>{0, 2, 1}));
  std::ostringstream report;
  WritePathReport(report, f.ks, paths, f.vocab);
  EXPECT_EQ(report.str(), "1\t0.5\th\tbinds\ta\tcauses\tt\n");
}

TEST(ExplainTest, DegenerateSubgraphHasNoPaths) {
  Fixture f = MakeFixture(2);
  AddEntry(f.ks, 0, 0, kResembleRelation, 1.0);
  AddEntry(f.ks, 1, 1, kResembleRelation, 1.0);
  EXPECT_TRUE(EnumerateExplainingPaths(f.ks, {}).empty());
  AddEntry(f.ks, 0, 1, kResembleRelation, 0.0);
  EXPECT_TRUE(EnumerateExplainingPaths(f.ks, {}).empty());
}

TEST(ExplainTest, ResembleEdgesFormPaths) {
  Fixture f = MakeFixture(2);
  AddEntry(f.ks, 0, 1, kResembleRelation, 0.3);
  const auto paths = EnumerateExplainingPaths(f.ks, {});
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].hops[0].relation, kResembleRelation);
}

TEST(ExplainTest, IdentityPaddingOnTail) {
  Fixture f = MakeFixture(2);
  AddEntry(f.ks, 0, 1, 2, 0.8);
  AddEntry(f.ks, 1, 1, kIdentityRelation, 0.5);
  ExplainOptions options;
  options.max_path_length = 3;
  const auto plain = EnumerateExplainingPaths(f.ks, options);
  ASSERT_EQ(plain.size(), 1u);
  EXPECT_EQ(plain[0].hops.size(), 1u);
  EXPECT_DOUBLE_EQ(plain[0].avg_strength, 0.8);
  options.pad_identity = true;
  const auto padded = EnumerateExplainingPaths(f.ks, options);
  ASSERT_EQ(padded.size(), 1u);
  EXPECT_EQ(padded[0].hops.size(), 3u);
  EXPECT_EQ(padded[0].nodes, (std::vector<uint32_t>{0, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(padded[0].avg_strength, (0.8 + 0.5 + 0.5) / 3.0);
}

TEST(ExplainTest, TiesPreferShorterPaths) {
  Fixture f = MakeFixture(3);
  AddEntry(f.ks, 0, 1, 2, 0.5);
  AddEntry(f.ks, 0, 2, 2, 0.5);
  AddEntry(f.ks, 2, 1, 2, 0.5);
  const auto paths = EnumerateExplainingPaths(f.ks, {});
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].hops.size(), 1u);
  EXPECT_EQ(paths[1].hops.size(), 2u);
}

using PathKey = std::pair<std::vector<uint32_t>, std::vector<RelationId>>;

// Every sequence of up to P positive off-diagonal entries, kept when it chains
// from head to tail without repeating a node.
std::map<PathKey, double> BruteForcePaths(const KnowledgeSubgraph& ks, int P) {
  std::vector<StrengthEntry> edges;
  for (const auto& e : ks.entries) {
    if (e.strength > 0.0 && e.src != e.dst) edges.push_back(e);
  }
  std::map<PathKey, double> out;
  std::vector<size_t> choice;
  for (int len = 1; len <= P; ++len) {
    choice.assign(len, 0);
    while (true) {
      bool ok = edges[choice[0]].src == 0 && edges[choice[len - 1]].dst == 1;
      std::vector<uint32_t> nodes = {0};
      std::vector<RelationId> rels;
      double sum = 0.0;
      for (int k = 0; ok && k < len; ++k) {
        const StrengthEntry& e = edges[choice[k]];
        if (e.src != nodes.back()) ok = false;
        if (std::find(nodes.begin(), nodes.end(), e.dst) != nodes.end()) ok = false;
        nodes.push_back(e.dst);
        rels.push_back(e.relation);
        sum += e.strength;
      }
      if (ok) out[{nodes, rels}] = sum / len;
      int k = len - 1;
      while (k >= 0 && ++choice[k] == edges.size()) choice[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

TEST(ExplainTest, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const size_t n = 2 + rng() % 5;
    Fixture f = MakeFixture(n);
    for (uint32_t u = 0; u < n; ++u) {
      for (uint32_t v = 0; v < n; ++v) {
        if (rng() % 3 != 0) continue;
        const RelationId r = rng() % 3 == 0 ? kResembleRelation : RelationId(2 + rng() % 2);
        AddEntry(f.ks, u, v, r, rng() % 4 == 0 ? 0.0 : unit(rng));
      }
    }
    if (f.ks.entries.empty()) continue;
    ExplainOptions options;
    options.max_path_length = 1 + trial % 4;
    options.max_paths = 1000;
    const auto paths = EnumerateExplainingPaths(f.ks, options);
    const auto want = BruteForcePaths(f.ks, options.max_path_length);
    ASSERT_EQ(paths.size(), want.size());
    for (size_t i = 0; i < paths.size(); ++i) {
      std::vector<RelationId> rels;
      for (const PathHop& hop : paths[i].hops) rels.push_back(hop.relation);
      const auto it = want.find({paths[i].nodes, rels});
      ASSERT_NE(it, want.end());
      EXPECT_NEAR(paths[i].avg_strength, it->second, 1e-15);
      EXPECT_GT(paths[i].avg_strength, 0.0);
      EXPECT_LE(paths[i].avg_strength, 1.0);
      if (i > 0) EXPECT_GE(paths[i - 1].avg_strength, paths[i].avg_strength);
    }
    options.max_paths = 2;
    const auto top = EnumerateExplainingPaths(f.ks, options);
    ASSERT_EQ(top.size(), std::min<size_t>(2, paths.size()));
    for (size_t i = 0; i < top.size(); ++i) EXPECT_EQ(top[i].nodes, paths[i].nodes);
  }
}

TEST(DotExportTest, EmptySubgraphMarksEndpoints) {
  Fixture f = MakeFixture(2);
  const std::string dot = ExportDot(f.ks, {}, f.vocab);
  ASSERT_TRUE(ValidDot(dot));
  EXPECT_EQ(dot.find("->"), std::string::npos);
  EXPECT_NE(dot.find("xlabel=\"head\""), std::string::npos);
  EXPECT_NE(dot.find("xlabel=\"tail\""), std::string::npos);
}

TEST(DotExportTest, FullStrengthUsesMaximumPenWidth) {
  Fixture f = MakeFixture(3);
  AddEntry(f.ks, 0, 2, 2, 1.0);
  AddEntry(f.ks, 2, 1, kResembleRelation, 0.2);
  const auto paths = EnumerateExplainingPaths(f.ks, {});
  const std::string dot = ExportDot(f.ks, paths, f.vocab);
  ASSERT_TRUE(ValidDot(dot));
  EXPECT_NE(dot.find("n0 -> n2 [label=\"binds (1)\", penwidth=5"), std::string::npos);
  EXPECT_NE(dot.find("penwidth=1, style=dotted"), std::string::npos);
}

TEST(DotExportTest, OddLabelsStayValid) {
  Fixture f;
  f.vocab.nodes.Intern("drug \"x\"");
  f.vocab.nodes.Intern("back\\slash");
  f.vocab.relations.Intern("rel{1}; -> x");
  f.ks.base.nodes = {0, 1};
  AddEntry(f.ks, 0, 1, 2, 0.7);
  DotStyle style;
  style.show_strength_labels = false;
  EXPECT_TRUE(ValidDot(ExportDot(f.ks, EnumerateExplainingPaths(f.ks, {}), f.vocab, style)));
}

}  // namespace
}  // namespace knowddi
