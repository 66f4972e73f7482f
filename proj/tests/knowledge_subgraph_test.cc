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
#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "knowddi/knowledge_subgraph.h"
#include "knowddi/autodiff.h"

namespace knowddi {
namespace {

constexpr size_t kDim = 5;
constexpr RelationId kRelA = 2;
constexpr RelationId kRelB = 3;

ParameterSet LearnerParams(uint64_t seed, size_t classes = 3) {
  std::mt19937_64 rng(seed);
  ParameterSet params;
  KnowledgeSubgraphLearner::InitParams(params, 4, classes, kDim, rng);
  return params;
}

Tensor RandomTensor(size_t rows, size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(rows, cols);
  for (size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

DrugFlowSubgraph MakeSubgraph(size_t n, std::vector<LocalEdge> edges) {
  DrugFlowSubgraph s;
  s.head = 100;
  s.tail = 101;
  for (size_t i = 0; i < n; ++i) s.nodes.push_back(static_cast<NodeId>(100 + i));
  std::sort(edges.begin(), edges.end());
  s.edges = std::move(edges);
  for (const LocalEdge& e : s.edges) s.relations.push_back(e.relation);
  std::sort(s.relations.begin(), s.relations.end());
  s.relations.erase(std::unique(s.relations.begin(), s.relations.end()), s.relations.end());
  return s;
}

DrugFlowSubgraph RandomSubgraph(std::mt19937_64& rng, size_t n) {
  std::vector<LocalEdge> edges;
  for (size_t i = 0; i < 2 * n; ++i) {
    const uint32_t u = rng() % n, v = rng() % n;
    edges.push_back({u, rng() % 2 ? kRelA : kRelB, v});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return MakeSubgraph(n, edges);
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double NaiveRelevance(const ParameterSet& p, const Tensor& h, size_t u, size_t v,
                      RelationId r) {
  const Tensor& w_pair = p.at("learner.mlp.w_pair");
  const Tensor& w_rel = p.at("learner.mlp.w_relation");
  const Tensor& b = p.at("learner.mlp.b_hidden");
  const Tensor& w_out = p.at("learner.mlp.w_out");
  const Tensor& rel = p.at(KnowledgeSubgraphLearner::RelationEmbeddingName());
  double out = p.at("learner.mlp.b_out")(0, 0);
  for (size_t j = 0; j < kDim; ++j) {
    double z = b(0, j);
    for (size_t i = 0; i < kDim; ++i) {
      z += std::exp(-std::fabs(h(u, i) - h(v, i))) * w_pair(i, j);
      z += rel(r, i) * w_rel(i, j);
    }
    out += std::max(0.0, z) * w_out(j, 0);
  }
  return Sigmoid(out);
}

// Softmax per destination followed by the threshold, one group at a time.
std::vector<double> NaiveMerge(const CandidateSet& set, const std::vector<double>& c,
                               double alpha, double gamma) {
  std::map<uint32_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < set.entries.size(); ++i) groups[set.entries[i].dst].push_back(i);
  std::vector<double> out(set.entries.size());
  for (const auto& [dst, members] : groups) {
    double z = 0.0;
    for (size_t i : members) {
      z += std::exp(alpha * (set.entries[i].original ? 1.0 : 0.0) + (1.0 - alpha) * c[i]);
    }
    for (size_t i : members) {
      const double s =
          std::exp(alpha * (set.entries[i].original ? 1.0 : 0.0) + (1.0 - alpha) * c[i]) / z;
      out[i] = std::max(0.0, s - gamma);
    }
  }
  return out;
}

std::vector<double> RunMerge(const CandidateSet& set, const std::vector<double>& c,
                             double alpha, double gamma) {
  Tape tape;
  Var rel = tape.Constant(Tensor(c.size(), 1, c));
  const Tensor out =
      KnowledgeSubgraphLearner::MergeAndThreshold(set, rel, alpha, gamma).first.value();
  return {out.values().begin(), out.values().end()};
}

TEST(CandidateSetTest, SupportLayout) {
  const DrugFlowSubgraph s = MakeSubgraph(3, {{0, kRelA, 1}, {1, kRelB, 2}, {2, kRelA, 2}});
  const CandidateSet set = CandidateSet::Build(s, true);
  // 6 ordered pairs, 2 with originals, plus 3 self entries.
  EXPECT_EQ(set.num_offdiagonal, 6u);
  EXPECT_EQ(set.entries.size(), 9u);
  for (size_t i = set.num_offdiagonal; i < set.entries.size(); ++i) {
    EXPECT_EQ(set.entries[i].src, set.entries[i].dst);
  }
  EXPECT_TRUE(set.entries.back().original);  // 2 -> 2 via kRelA
  EXPECT_EQ(set.relations.back(), kResembleRelation);
  const CandidateSet plain = CandidateSet::Build(s, false);
  EXPECT_EQ(plain.num_offdiagonal, 2u);
  EXPECT_EQ(plain.entries.size(), 5u);
}

TEST(RelevanceTest, MatchesNaiveMlp) {
  std::mt19937_64 rng(1);
  const ParameterSet params = LearnerParams(2);
  const Tensor h = RandomTensor(4, kDim, rng);
  const std::vector<RelationId> rels = {kResembleRelation, kRelA, kRelB};
  const std::vector<double> dense = DenseRelevanceScores(params, h, rels);
  for (size_t u = 0; u < 4; ++u) {
    for (size_t v = 0; v < 4; ++v) {
      for (size_t s = 0; s < rels.size(); ++s) {
        const double got = dense[(u * 4 + v) * rels.size() + s];
        if (u == v) {
          EXPECT_EQ(got, 1.0);
        } else {
          EXPECT_NEAR(got, NaiveRelevance(params, h, u, v, rels[s]), 1e-13);
          EXPECT_GT(got, 0.0);
          EXPECT_LT(got, 1.0);
        }
      }
    }
  }
}

TEST(RelevanceTest, SymmetricInPairForSameRelation) {
  std::mt19937_64 rng(3);
  const ParameterSet params = LearnerParams(4);
  const Tensor h = RandomTensor(3, kDim, rng);
  const std::vector<RelationId> rels = {kRelA};
  const std::vector<double> dense = DenseRelevanceScores(params, h, rels);
  EXPECT_DOUBLE_EQ(dense[0 * 3 + 1], dense[1 * 3 + 0]);
}

TEST(MergeTest, MatchesGroupSoftmaxOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const DrugFlowSubgraph s = RandomSubgraph(rng, 2 + rng() % 5);
    const CandidateSet set = CandidateSet::Build(s, trial % 2 == 0);
    std::vector<double> c(set.entries.size(), 1.0);
    for (size_t i = 0; i < set.num_offdiagonal; ++i) c[i] = unit(rng);
    const double alpha = unit(rng), gamma = 0.3 * unit(rng);
    const auto got = RunMerge(set, c, alpha, gamma);
    const auto want = NaiveMerge(set, c, alpha, gamma);
    for (size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-14);
  }
}

TEST(MergeTest, TwoEqualOriginalsShareEvenly) {
  const DrugFlowSubgraph s = MakeSubgraph(3, {{0, kRelA, 2}, {1, kRelA, 2}});
  const CandidateSet set = CandidateSet::Build(s, true);
  const std::vector<double> c(set.entries.size(), 1.0);
  const auto a = RunMerge(set, c, 1.0, 0.0);
  std::vector<double> into_two;
  double total = 0.0;
  for (size_t i = 0; i < set.entries.size(); ++i) {
    if (set.entries[i].dst != 2) continue;
    total += a[i];
    if (set.entries[i].original) into_two.push_back(a[i]);
  }
  ASSERT_EQ(into_two.size(), 2u);
  EXPECT_DOUBLE_EQ(into_two[0], into_two[1]);
  // Two originals at e^1 against the self entry at e^0.
  EXPECT_NEAR(into_two[0], std::exp(1.0) / (2.0 * std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(MergeTest, ThresholdAtOneClearsEverything) {
  std::mt19937_64 rng(6);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 5);
  const CandidateSet set = CandidateSet::Build(s, true);
  const std::vector<double> c(set.entries.size(), 0.5);
  for (double gamma : {1.0, 1.5}) {
    for (double x : RunMerge(set, c, 0.3, gamma)) EXPECT_EQ(x, 0.0);
  }
}

TEST(MergeTest, StrengthsBoundedAndMonotoneInGamma) {
  std::mt19937_64 rng(7);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 6);
  const CandidateSet set = CandidateSet::Build(s, true);
  std::vector<double> c(set.entries.size(), 1.0);
  for (size_t i = 0; i < set.num_offdiagonal; ++i) c[i] = 0.1 * static_cast<double>(i % 10);
  const auto low = RunMerge(set, c, 0.5, 0.01);
  const auto high = RunMerge(set, c, 0.5, 0.1);
  for (size_t i = 0; i < low.size(); ++i) {
    EXPECT_GE(low[i], 0.0);
    EXPECT_LE(low[i], 1.0);
    EXPECT_GE(low[i], high[i]);
  }
}

TEST(GenerateTest, AlphaOneIgnoresRelevanceNetwork) {
  std::mt19937_64 rng(8);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 5);
  const Tensor table = RandomTensor(120, kDim, rng);
  ParameterSet params = LearnerParams(9);
  LearnerOptions options;
  options.alpha = 1.0;
  options.gamma = 0.0;
  const KnowledgeSubgraph a = GenerateKnowledgeSubgraph(s, table, params, options);
  params.at("learner.mlp.w_out").Fill(3.0);
  params.at("learner.mlp.b_out").Fill(-2.0);
  const KnowledgeSubgraph b = GenerateKnowledgeSubgraph(s, table, params, options);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  const CandidateSet set = CandidateSet::Build(s, true);
  const auto want = NaiveMerge(set, std::vector<double>(set.entries.size(), 0.0), 1.0, 0.0);
  for (size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].strength, b.entries[i].strength);
    EXPECT_NEAR(a.entries[i].strength, want[i], 1e-14);
  }
}

TEST(GenerateTest, IdenticalDisconnectedNodesGetResembleEdge) {
  const DrugFlowSubgraph s = MakeSubgraph(2, {});
  Tensor table(102, kDim, 0.25);
  const ParameterSet params = LearnerParams(10);
  LearnerOptions options;
  options.alpha = 0.5;
  options.gamma = 0.0;
  options.iterations = 1;
  const KnowledgeSubgraph k = GenerateKnowledgeSubgraph(s, table, params, options);
  EXPECT_GT(k.Strength(0, 1, kResembleRelation), 0.0);
  EXPECT_GT(k.Strength(1, 0, kResembleRelation), 0.0);
  EXPECT_EQ(k.Strength(0, 1, kRelA), 0.0);
}

TEST(GenerateTest, DegenerateSubgraphInAllModes) {
  const DrugFlowSubgraph s = MakeSubgraph(2, {});
  std::mt19937_64 rng(11);
  const Tensor table = RandomTensor(102, kDim, rng);
  const ParameterSet params = LearnerParams(12);
  for (bool learn : {true, false}) {
    LearnerOptions options;
    options.learn_structure = learn;
    options.add_resemble = learn;
    const KnowledgeSubgraph k = GenerateKnowledgeSubgraph(s, table, params, options);
    EXPECT_TRUE(k.embeddings.AllFinite());
    const auto p = Predict(k, Task::kMulticlass, params);
    double sum = 0.0;
    for (double x : p) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    if (!learn) {
      ASSERT_EQ(k.entries.size(), 2u);
      for (const auto& e : k.entries) EXPECT_EQ(e.strength, 1.0);
    }
  }
}

TEST(GenerateTest, BitStableAcrossRuns) {
  std::mt19937_64 rng(13);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 6);
  const Tensor table = RandomTensor(120, kDim, rng);
  const ParameterSet params = LearnerParams(14);
  const LearnerOptions options;
  const KnowledgeSubgraph a = GenerateKnowledgeSubgraph(s, table, params, options);
  const KnowledgeSubgraph b = GenerateKnowledgeSubgraph(s, table, params, options);
  EXPECT_EQ(a.DenseStrengths(), b.DenseStrengths());
  EXPECT_EQ(a.embeddings, b.embeddings);
}

TEST(PropagateTest, ZeroStrengthsGiveZeroEmbeddings) {
  std::mt19937_64 rng(15);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 5);
  const CandidateSet set = CandidateSet::Build(s, true);
  const ParameterSet params = LearnerParams(16);
  Tape tape;
  ParameterBinding binding(tape, params);
  Var zeros = tape.Constant(Tensor(set.entries.size(), 1));
  Var h = tape.Constant(RandomTensor(5, kDim, rng));
  const Tensor out = KnowledgeSubgraphLearner::Propagate(binding, set, zeros, h).value();
  for (size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], 0.0);
}

TEST(PropagateTest, SelfStrengthWithIdentityWeightIsRelu) {
  CandidateSet set;
  set.num_nodes = 3;
  for (uint32_t v = 0; v < 3; ++v) set.entries.push_back({v, v, kRelA, true});
  set.relations = {kRelA};
  ParameterSet params = LearnerParams(17);
  Tensor& w = params.at(KnowledgeSubgraphLearner::PropagationName(kRelA));
  w.Fill(0.0);
  for (size_t k = 0; k < kDim; ++k) w(k, k) = 1.0;
  std::mt19937_64 rng(18);
  const Tensor input = RandomTensor(3, kDim, rng);
  Tape tape;
  ParameterBinding binding(tape, params);
  const Tensor out = KnowledgeSubgraphLearner::Propagate(
                         binding, set, tape.Constant(Tensor(3, 1, 1.0)), tape.Constant(input))
                         .value();
  for (size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], std::max(0.0, input[i]));
}

TEST(PropagateTest, MatchesNaiveTripleLoop) {
  std::mt19937_64 rng(19);
  const ParameterSet params = LearnerParams(20);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t n = 3 + rng() % 4;
    const DrugFlowSubgraph s = RandomSubgraph(rng, n);
    const CandidateSet set = CandidateSet::Build(s, true);
    const Tensor a = RandomTensor(set.entries.size(), 1, rng);
    const Tensor h = RandomTensor(n, kDim, rng);
    Tape tape;
    ParameterBinding binding(tape, params);
    const Tensor got = KnowledgeSubgraphLearner::Propagate(binding, set, tape.Constant(a),
                                                           tape.Constant(h))
                           .value();
    Tensor want(n, kDim);
    for (RelationId r : set.relations) {
      const Tensor& w = params.at(KnowledgeSubgraphLearner::PropagationName(r));
      for (size_t v = 0; v < n; ++v) {
        std::vector<double> agg(kDim, 0.0);
        for (size_t i = 0; i < set.entries.size(); ++i) {
          const Candidate& c = set.entries[i];
          if (c.dst != v || c.relation != r) continue;
          for (size_t k = 0; k < kDim; ++k) agg[k] += a[i] * h(c.src, k);
        }
        for (size_t j = 0; j < kDim; ++j) {
          double z = 0.0;
          for (size_t k = 0; k < kDim; ++k) z += agg[k] * w(k, j);
          want(v, j) += std::max(0.0, z) / static_cast<double>(set.relations.size());
        }
      }
    }
    for (size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-13);
  }
}

TEST(PredictTest, ZeroClassifierGivesUniformOutputs) {
  std::mt19937_64 rng(21);
  const DrugFlowSubgraph s = RandomSubgraph(rng, 4);
  const Tensor table = RandomTensor(110, kDim, rng);
  ParameterSet params = LearnerParams(22, 4);
  params.at(KnowledgeSubgraphLearner::ClassifierName()).Fill(0.0);
  const KnowledgeSubgraph k = GenerateKnowledgeSubgraph(s, table, params, {});
  for (double p : Predict(k, Task::kMulticlass, params)) EXPECT_DOUBLE_EQ(p, 0.25);
  for (double p : Predict(k, Task::kMultilabel, params)) EXPECT_DOUBLE_EQ(p, 0.5);
}

TEST(PredictTest, MulticlassArgmaxIgnoresLogitShift) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor logits = RandomTensor(1, 6, rng);
    Tensor shifted = logits;
    for (size_t i = 0; i < shifted.size(); ++i) shifted[i] += 7.5;
    Tape tape;
    const Tensor p = OutputProbabilities(tape.Constant(logits), Task::kMulticlass).value();
    const Tensor q = OutputProbabilities(tape.Constant(shifted), Task::kMulticlass).value();
    const auto pv = p.values(), qv = q.values();
    EXPECT_EQ(std::max_element(pv.begin(), pv.end()) - pv.begin(),
              std::max_element(qv.begin(), qv.end()) - qv.begin());
    for (size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-14);
  }
}

}  // namespace
}  // namespace knowddi
