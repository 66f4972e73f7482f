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

#include "knowddi/oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "knowddi/config.h"

namespace knowddi::oracles {
namespace {

constexpr RelationId kFirstRelation = kResembleRelation + 1;

bool SubsetOf(const DrugFlowSubgraph& a, const DrugFlowSubgraph& b) {
  const InducedSubgraph ia = ToInduced(a), ib = ToInduced(b);
  return std::includes(ib.nodes.begin(), ib.nodes.end(), ia.nodes.begin(), ia.nodes.end()) &&
         std::includes(ib.edges.begin(), ib.edges.end(), ia.edges.begin(), ia.edges.end());
}

bool SameSets(const DrugFlowSubgraph& sub, const WalkSets& oracle) {
  const InducedSubgraph induced = ToInduced(sub);
  return std::equal(induced.nodes.begin(), induced.nodes.end(), oracle.nodes.begin(),
                    oracle.nodes.end()) &&
         std::equal(induced.edges.begin(), induced.edges.end(), oracle.edges.begin(),
                    oracle.edges.end());
}

}  // namespace

InducedSubgraph RandomMultigraph(std::mt19937_64& rng, size_t max_nodes,
                                 size_t max_relations) {
  std::uniform_int_distribution<size_t> node_count(2, std::max<size_t>(2, max_nodes));
  const size_t n = node_count(rng);
  std::uniform_int_distribution<size_t> rel_count(1, std::max<size_t>(1, max_relations));
  const size_t relations = rel_count(rng);
  std::uniform_int_distribution<size_t> edge_count(0, 3 * n);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<RelationId> rel(
      kFirstRelation, static_cast<RelationId>(kFirstRelation + relations - 1));
  std::set<FactTriplet> edges;
  const size_t m = edge_count(rng);
  for (size_t i = 0; i < m; ++i) edges.insert({node(rng), rel(rng), node(rng)});
  InducedSubgraph g;
  for (NodeId v = 0; v < n; ++v) g.nodes.push_back(v);
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

WalkSets EnumerateWalkSets(const InducedSubgraph& graph, NodeId head, NodeId tail, int P) {
  std::map<NodeId, std::vector<FactTriplet>> out;
  for (const FactTriplet& e : graph.edges) out[e.head].push_back(e);
  WalkSets sets;
  std::vector<FactTriplet> walk;
  int shortest = P + 1;
  std::function<void(NodeId)> extend = [&](NodeId u) {
    if (u == tail && !walk.empty()) {
      shortest = std::min(shortest, static_cast<int>(walk.size()));
      sets.nodes.insert(head);
      for (const FactTriplet& e : walk) {
        sets.nodes.insert(e.head);
        sets.nodes.insert(e.tail);
        sets.edges.insert(e);
      }
    }
    if (static_cast<int>(walk.size()) == P) return;
    for (const FactTriplet& e : out[u]) {
      walk.push_back(e);
      extend(e.tail);
      walk.pop_back();
    }
  };
  extend(head);
  if (sets.nodes.empty()) {
    sets.nodes = {head, tail};
    return sets;
  }
  if (shortest < P) sets.edges.insert({tail, kIdentityRelation, tail});
  return sets;
}

double PairwiseAuroc(std::span<const double> scores, std::span<const bool> labels) {
  double credit = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) credit += 1.0;
      if (scores[i] == scores[j]) credit += 0.5;
    }
  }
  return pairs == 0 ? std::nan("") : credit / static_cast<double>(pairs);
}

double ThresholdLoopAveragePrecision(std::span<const double> scores,
                                     std::span<const bool> labels) {
  std::vector<double> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  size_t positives = 0;
  for (bool l : labels) positives += l ? 1 : 0;
  if (positives == 0) return std::nan("");
  double ap = 0.0, prev_recall = 0.0;
  for (double tau : thresholds) {
    size_t tp = 0, predicted = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] < tau) continue;
      ++predicted;
      if (labels[i]) ++tp;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    ap += (recall - prev_recall) * static_cast<double>(tp) / static_cast<double>(predicted);
    prev_recall = recall;
  }
  return ap;
}

double RankLoopApAtK(std::span<const double> scores, std::span<const bool> labels,
                     size_t k) {
  std::vector<bool> used(scores.size(), false);
  size_t positives = 0;
  for (bool l : labels) positives += l ? 1 : 0;
  const size_t denom = std::min(positives, k);
  if (denom == 0) return std::nan("");
  double sum = 0.0;
  size_t hits = 0;
  for (size_t rank = 1; rank <= std::min(k, scores.size()); ++rank) {
    size_t best = scores.size();
    for (size_t i = 0; i < scores.size(); ++i) {
      if (used[i]) continue;
      if (best == scores.size() || scores[i] > scores[best]) best = i;
    }
    used[best] = true;
    if (labels[best]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }
  return sum / static_cast<double>(denom);
}

ClassificationMetrics ConfusionMatrixMetrics(std::span<const size_t> truth,
                                             std::span<const size_t> predicted,
                                             size_t num_classes) {
  std::vector<std::vector<size_t>> matrix(num_classes, std::vector<size_t>(num_classes, 0));
  for (size_t i = 0; i < truth.size(); ++i) ++matrix[truth[i]][predicted[i]];
  ClassificationMetrics m;
  const double n = static_cast<double>(truth.size());
  size_t trace = 0;
  uint64_t products = 0;
  double f1_sum = 0.0;
  for (size_t c = 0; c < num_classes; ++c) {
    size_t row = 0, col = 0;
    for (size_t j = 0; j < num_classes; ++j) {
      row += matrix[c][j];
      col += matrix[j][c];
    }
    trace += matrix[c][c];
    products += static_cast<uint64_t>(row) * col;
    const double f1 =
        row + col == 0 ? 0.0 : 2.0 * matrix[c][c] / static_cast<double>(row + col);
    m.per_class_f1.push_back(f1);
    m.per_class_support.push_back(row);
    f1_sum += f1;
  }
  m.macro_f1 = f1_sum / static_cast<double>(num_classes);
  m.accuracy = static_cast<double>(trace) / n;
  const double pe = static_cast<double>(products) / (n * n);
  m.kappa = pe >= 1.0 ? (m.accuracy == 1.0 ? 1.0 : 0.0) : (m.accuracy - pe) / (1.0 - pe);
  return m;
}

CombinedNetwork RandomNetwork(std::mt19937_64& rng, size_t max_nodes,
                              std::vector<FactTriplet>* ddi) {
  Vocabularies vocab;
  std::uniform_int_distribution<size_t> drug_count(3, 5);
  const size_t drugs = drug_count(rng);
  std::uniform_int_distribution<size_t> other_count(1, std::max<size_t>(1, max_nodes - drugs));
  const size_t others = other_count(rng);
  for (size_t i = 0; i < drugs; ++i) vocab.nodes.Intern("drug" + std::to_string(i));
  for (size_t i = 0; i < others; ++i) vocab.nodes.Intern("entity" + std::to_string(i));
  const RelationId ddi_rel[2] = {vocab.relations.Intern("ddi_a"),
                                 vocab.relations.Intern("ddi_b")};
  const RelationId kg_rel = vocab.relations.Intern("kg");
  std::uniform_int_distribution<NodeId> drug(0, static_cast<NodeId>(drugs - 1));
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(drugs + others - 1));
  std::set<FactTriplet> ddi_set, kg_set;
  // Both DDI relations must occur so the class count is fixed.
  for (int i = 0; i < 6 || ddi_set.size() < 2; ++i) {
    const NodeId h = drug(rng), t = drug(rng);
    if (h != t) ddi_set.insert({h, ddi_rel[ddi_set.size() % 2], t});
  }
  const size_t kg_edges = 2 * (drugs + others);
  for (size_t i = 0; i < kg_edges; ++i) {
    const NodeId h = any(rng), t = any(rng);
    if (h != t) kg_set.insert({h, kg_rel, t});
  }
  ddi->assign(ddi_set.begin(), ddi_set.end());
  const std::vector<FactTriplet> kg(kg_set.begin(), kg_set.end());
  return CombinedNetwork::Build(std::move(vocab), *ddi, *ddi, kg);
}

double ModelGradientError(KnowDdiModel& model, std::span<const PairSample> batch,
                          double eps, std::string* worst_parameter) {
  ParameterSet grads = model.params().ZerosLike();
  model.Loss(batch, &grads, nullptr, 1);
  double worst = 0.0;
  for (size_t p = 0; p < grads.size(); ++p) {
    Tensor& value = model.params().value(p);
    for (size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + eps;
      const double plus = model.Loss(batch, nullptr, nullptr, 1);
      value[i] = saved - eps;
      const double minus = model.Loss(batch, nullptr, nullptr, 1);
      value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double analytic = grads.value(p)[i];
      const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
      if (err > worst) {
        worst = err;
        if (worst_parameter) *worst_parameter = grads.name(p);
      }
    }
  }
  return worst;
}

void CheckKnowledgeSubgraph(const KnowledgeSubgraph& ks, const LearnerOptions& options,
                            Task task, const ParameterSet& params, StructureReport* report) {
  const size_t n = ks.base.size();
  std::vector<double> incoming(n, 0.0);
  for (const StrengthEntry& e : ks.entries) incoming[e.dst] += e.normalized;
  for (double s : incoming) {
    report->max_normalized_sum_error =
        std::max(report->max_normalized_sum_error, std::abs(s - 1.0));
  }
  const double gamma = options.learn_structure ? options.gamma : 0.0;
  for (const StrengthEntry& e : ks.entries) {
    report->max_threshold_error =
        std::max(report->max_threshold_error,
                 std::abs(e.strength - std::max(0.0, e.normalized - gamma)));
    if (e.strength <= 0.0) continue;
    bool ok;
    if (e.original) {
      ok = ks.base.Adjacent(e.src, e.dst, e.relation);
    } else {
      bool connected = false;
      for (const LocalEdge& edge : ks.base.edges) {
        if (edge.src == e.src && edge.dst == e.dst) connected = true;
      }
      ok = e.relation == kResembleRelation && !connected;
    }
    if (!ok) ++report->dichotomy_violations;
  }
  if (task == Task::kMulticlass) {
    double sum = 0.0;
    for (double p : Predict(ks, task, params)) sum += p;
    report->max_probability_sum_error =
        std::max(report->max_probability_sum_error, std::abs(sum - 1.0));
  }
}

SuiteResult GradientSuite(size_t instances, uint64_t seed) {
  SuiteResult result{"gradients", true, instances, 0.0, ""};
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < instances; ++i) {
    std::vector<FactTriplet> ddi;
    const CombinedNetwork net = RandomNetwork(rng, 10, &ddi);
    RunConfig config;
    config.dim = 8;
    config.iterations = 2;
    config.layers = 1 + static_cast<int>(i % 2);
    config.dropout = 0.0;
    config.max_path_length = 3 + static_cast<int>(i % 2);
    config.task = i % 3 == 2 ? Task::kMultilabel : Task::kMulticlass;
    config.seed = rng();
    KnowDdiModel model(net, config);
    std::vector<FactTriplet> picked = {ddi.front(), ddi.back()};
    std::vector<PairSample> batch = BuildSamples(net, picked, config.task);
    if (config.task == Task::kMultilabel) {
      std::vector<FactTriplet> negative = {{picked[0].head, picked[0].relation, picked[0].head}};
      for (NodeId w : net.drug_nodes()) {
        if (w != picked[0].head && !net.HasEdge(picked[0].head, picked[0].relation, w)) {
          negative[0].tail = w;
        }
      }
      if (negative[0].tail != negative[0].head) {
        auto neg = BuildNegativeSamples(net, negative);
        batch.insert(batch.end(), neg.begin(), neg.end());
      }
    }
    std::string worst;
    const double err = ModelGradientError(model, batch, 1e-6, &worst);
    if (err > result.max_error) {
      result.max_error = err;
      result.detail = "worst instance " + std::to_string(i) + " at " + worst;
    }
  }
  result.passed = result.max_error < 1e-4;
  return result;
}

SuiteResult SubgraphSuite(size_t graphs, uint64_t seed) {
  SuiteResult result{"subgraphs", true, 0, 0.0, ""};
  std::mt19937_64 rng(seed);
  size_t failures = 0;
  for (size_t g = 0; g < graphs; ++g) {
    const InducedSubgraph graph = RandomMultigraph(rng, 14, 3);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(graph.nodes.size() - 1));
    const NodeId head = node(rng);
    NodeId tail = node(rng);
    while (tail == head) tail = node(rng);
    DrugFlowSubgraph previous;
    for (int P = 2; P <= 4; ++P) {
      ++result.cases;
      const DrugFlowSubgraph sub = DirectionalPrune(graph, head, tail, P);
      bool ok = SameSets(sub, EnumerateWalkSets(graph, head, tail, P));
      const DrugFlowSubgraph again = DirectionalPrune(ToInduced(sub), head, tail, P);
      ok = ok && ToInduced(again).nodes == ToInduced(sub).nodes &&
           ToInduced(again).edges == ToInduced(sub).edges;
      if (P > 2) ok = ok && SubsetOf(previous, sub);
      if (!ok && failures++ == 0) {
        result.detail = "first failure: graph " + std::to_string(g) + " P=" + std::to_string(P);
      }
      previous = sub;
    }
  }
  result.max_error = static_cast<double>(failures);
  result.passed = failures == 0;
  if (result.passed) result.detail = "all node and edge sets equal";
  return result;
}

SuiteResult MetricSuite(size_t score_sets, uint64_t seed) {
  SuiteResult result{"metrics", true, 0, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> size(2, 100);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (size_t s = 0; s < score_sets; ++s) {
    const size_t n = size(rng);
    const bool coarse = s % 2 == 0;  // coarse scores force ties
    std::vector<double> scores(n);
    std::unique_ptr<bool[]> labels(new bool[n]);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = coarse ? std::round(unit(rng) * 10.0) / 10.0 : unit(rng);
      labels[i] = unit(rng) < 0.4;
    }
    labels[0] = true;
    labels[n - 1] = false;
    std::span<const bool> lab(labels.get(), n);
    result.cases += 3;
    result.max_error = std::max({result.max_error,
                                 std::abs(Auroc(scores, lab) - PairwiseAuroc(scores, lab)),
                                 std::abs(AveragePrecision(scores, lab) -
                                          ThresholdLoopAveragePrecision(scores, lab)),
                                 std::abs(AveragePrecisionAtK(scores, lab, 50) -
                                          RankLoopApAtK(scores, lab, 50))});
  }
  bool exact = true;
  std::uniform_int_distribution<size_t> cls(0, 9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<size_t> truth(500), predicted(500);
    for (size_t i = 0; i < 500; ++i) {
      truth[i] = cls(rng);
      predicted[i] = unit(rng) < 0.6 ? truth[i] : cls(rng);
    }
    const ClassificationMetrics a = ComputeClassificationMetrics(truth, predicted, 10);
    const ClassificationMetrics b = ConfusionMatrixMetrics(truth, predicted, 10);
    exact = exact && a.macro_f1 == b.macro_f1 && a.accuracy == b.accuracy &&
            a.kappa == b.kappa && a.per_class_f1 == b.per_class_f1;
    ++result.cases;
  }
  const bool l1[] = {true, false, true, false};
  const double s1[] = {0.9, 0.8, 0.3, 0.2};
  const double auroc_case = Auroc(s1, l1);
  const std::vector<size_t> truth = {0, 0, 1, 1}, pred = {0, 1, 0, 1};
  const ClassificationMetrics k = ComputeClassificationMetrics(truth, pred, 2);
  const bool analytic =
      std::abs(auroc_case - 0.75) < 1e-12 && k.accuracy == 0.5 && std::abs(k.kappa) < 1e-12;
  result.passed = result.max_error < 1e-9 && exact && analytic;
  std::ostringstream detail;
  detail << "classification exact=" << (exact ? "yes" : "no")
         << " analytic cases=" << (analytic ? "ok" : "wrong");
  result.detail = detail.str();
  return result;
}

SuiteResult StructureSuite(size_t subgraphs, uint64_t seed) {
  SuiteResult result{"structure", true, 0, 0.0, ""};
  std::mt19937_64 rng(seed);
  StructureReport report;
  while (result.cases < subgraphs) {
    std::vector<FactTriplet> ddi;
    const CombinedNetwork net = RandomNetwork(rng, 12, &ddi);
    RunConfig config;
    config.dim = 8;
    config.seed = rng();
    config.subgraph_mode =
        result.cases % 2 == 0 ? SubgraphMode::kKnowledge : SubgraphMode::kDrugFlow;
    const KnowDdiModel model(net, config);
    for (const FactTriplet& t : ddi) {
      if (result.cases >= subgraphs) break;
      CheckKnowledgeSubgraph(model.Knowledge(t.head, t.tail), model.learner_options(),
                             config.task, model.params(), &report);
      ++result.cases;
    }
  }
  result.max_error = std::max({report.max_normalized_sum_error, report.max_threshold_error,
                               report.max_probability_sum_error});
  result.passed = result.max_error < 1e-9 && report.dichotomy_violations == 0;
  result.detail = "dichotomy violations " + std::to_string(report.dichotomy_violations);
  return result;
}

}  // namespace knowddi::oracles
