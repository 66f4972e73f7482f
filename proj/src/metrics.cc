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

#include "knowddi/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "knowddi/errors.h"

namespace knowddi {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void CheckSameSize(size_t a, size_t b) {
  if (a != b) throw ShapeError("scores and labels differ in length");
}

// Indices sorted by score descending; equal scores keep input order.
std::vector<size_t> DescendingOrder(std::span<const double> scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return order;
}

double MeanIgnoringNaN(std::span<const double> values) {
  double sum = 0.0;
  size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n == 0 ? kNaN : sum / static_cast<double>(n);
}

}  // namespace

ClassificationMetrics ComputeClassificationMetrics(std::span<const size_t> truth,
                                                   std::span<const size_t> predicted,
                                                   size_t num_classes) {
  CheckSameSize(truth.size(), predicted.size());
  if (truth.empty()) throw DataError("no records to evaluate");
  std::vector<size_t> tp(num_classes, 0), true_count(num_classes, 0),
      pred_count(num_classes, 0);
  size_t correct = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= num_classes || predicted[i] >= num_classes) {
      throw DataError("class index out of range");
    }
    ++true_count[truth[i]];
    ++pred_count[predicted[i]];
    if (truth[i] == predicted[i]) {
      ++tp[truth[i]];
      ++correct;
    }
  }
  const double n = static_cast<double>(truth.size());
  ClassificationMetrics m;
  m.per_class_f1.resize(num_classes);
  m.per_class_support = true_count;
  double f1_sum = 0.0;
  uint64_t marginal_products = 0;
  for (size_t c = 0; c < num_classes; ++c) {
    const size_t denom = true_count[c] + pred_count[c];
    m.per_class_f1[c] = denom == 0 ? 0.0 : 2.0 * tp[c] / static_cast<double>(denom);
    f1_sum += m.per_class_f1[c];
    marginal_products += static_cast<uint64_t>(true_count[c]) * pred_count[c];
  }
  m.macro_f1 = num_classes == 0 ? 0.0 : f1_sum / static_cast<double>(num_classes);
  m.accuracy = correct / n;
  const double expected = static_cast<double>(marginal_products) / (n * n);
  if (expected >= 1.0) {
    m.kappa = m.accuracy == 1.0 ? 1.0 : 0.0;
  } else {
    m.kappa = (m.accuracy - expected) / (1.0 - expected);
  }
  return m;
}

double Auroc(std::span<const double> scores, std::span<const bool> labels) {
  CheckSameSize(scores.size(), labels.size());
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  size_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return kNaN;
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

double AveragePrecision(std::span<const double> scores, std::span<const bool> labels) {
  CheckSameSize(scores.size(), labels.size());
  const size_t total_pos = static_cast<size_t>(std::count(labels.begin(), labels.end(), true));
  if (total_pos == 0) return kNaN;
  const std::vector<size_t> order = DescendingOrder(scores);
  double ap = 0.0, prev_recall = 0.0;
  size_t tp = 0, seen = 0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]]) ++tp;
      ++j;
    }
    seen = j;
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

double AveragePrecisionAtK(std::span<const double> scores, std::span<const bool> labels,
                           size_t k) {
  CheckSameSize(scores.size(), labels.size());
  const size_t total_pos = static_cast<size_t>(std::count(labels.begin(), labels.end(), true));
  const size_t denom = std::min(total_pos, k);
  if (denom == 0) return kNaN;
  const std::vector<size_t> order = DescendingOrder(scores);
  double sum = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < std::min(k, order.size()); ++i) {
    if (!labels[order[i]]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(denom);
}

RankingMetrics ComputeRankingMetrics(const std::vector<std::vector<double>>& scores,
                                     const std::vector<std::vector<bool>>& labels) {
  CheckSameSize(scores.size(), labels.size());
  const size_t relations = scores.size();
  RankingMetrics m;
  m.per_relation_auroc.assign(relations, kNaN);
  m.per_relation_auprc.assign(relations, kNaN);
  m.per_relation_ap50.assign(relations, kNaN);
  m.per_relation_positives.assign(relations, 0);
  for (size_t r = 0; r < relations; ++r) {
    CheckSameSize(scores[r].size(), labels[r].size());
    const size_t n = labels[r].size();
    std::unique_ptr<bool[]> flags(new bool[n]);
    size_t pos = 0;
    for (size_t i = 0; i < n; ++i) {
      flags[i] = labels[r][i];
      pos += flags[i] ? 1 : 0;
    }
    m.per_relation_positives[r] = pos;
    if (pos == 0 || pos == n) {
      ++m.relations_excluded;
      continue;
    }
    std::span<const bool> lab(flags.get(), n);
    m.per_relation_auroc[r] = Auroc(scores[r], lab);
    m.per_relation_auprc[r] = AveragePrecision(scores[r], lab);
    m.per_relation_ap50[r] = AveragePrecisionAtK(scores[r], lab, 50);
    ++m.relations_used;
  }
  if (m.relations_used == 0) throw DataError("no relation has both positives and negatives");
  m.auroc = MeanIgnoringNaN(m.per_relation_auroc);
  m.auprc = MeanIgnoringNaN(m.per_relation_auprc);
  m.ap_at_50 = MeanIgnoringNaN(m.per_relation_ap50);
  return m;
}

std::map<std::string, double> ToKeyValues(const ClassificationMetrics& m) {
  std::map<std::string, double> kv{
      {"macro_f1", m.macro_f1}, {"accuracy", m.accuracy}, {"kappa", m.kappa}};
  for (size_t c = 0; c < m.per_class_f1.size(); ++c) {
    kv["class." + std::to_string(c) + ".f1"] = m.per_class_f1[c];
    kv["class." + std::to_string(c) + ".support"] =
        static_cast<double>(m.per_class_support[c]);
  }
  return kv;
}

std::map<std::string, double> ToKeyValues(const RankingMetrics& m) {
  std::map<std::string, double> kv{{"auroc", m.auroc},
                                   {"auprc", m.auprc},
                                   {"ap_at_50", m.ap_at_50},
                                   {"relations_used", double(m.relations_used)},
                                   {"relations_excluded", double(m.relations_excluded)}};
  for (size_t r = 0; r < m.per_relation_auroc.size(); ++r) {
    const std::string p = "relation." + std::to_string(r) + ".";
    kv[p + "auroc"] = m.per_relation_auroc[r];
    kv[p + "auprc"] = m.per_relation_auprc[r];
    kv[p + "ap_at_50"] = m.per_relation_ap50[r];
    kv[p + "positives"] = static_cast<double>(m.per_relation_positives[r]);
  }
  return kv;
}

void WriteKeyValues(std::ostream& out, const std::map<std::string, double>& values) {
  out << std::setprecision(17);
  for (const auto& [key, value] : values) out << key << '=' << value << '\n';
}

void WriteReport(std::ostream& out, const ClassificationMetrics& m,
                 std::span<const std::string> class_names) {
  out << std::fixed << std::setprecision(2);
  out << "F1    " << 100.0 * m.macro_f1 << '\n';
  out << "ACC   " << 100.0 * m.accuracy << '\n';
  out << "Kappa " << 100.0 * m.kappa << '\n';
  out << "\nclass\tsupport\tF1\n";
  for (size_t c = 0; c < m.per_class_f1.size(); ++c) {
    out << (c < class_names.size() ? class_names[c] : std::to_string(c)) << '\t'
        << m.per_class_support[c] << '\t' << 100.0 * m.per_class_f1[c] << '\n';
  }
  out << std::defaultfloat;
}

void WriteReport(std::ostream& out, const RankingMetrics& m,
                 std::span<const std::string> class_names) {
  out << std::fixed << std::setprecision(2);
  out << "ROC-AUC " << 100.0 * m.auroc << '\n';
  out << "PR-AUC  " << 100.0 * m.auprc << '\n';
  out << "AP@50   " << 100.0 * m.ap_at_50 << '\n';
  out << "relations used " << m.relations_used << ", excluded " << m.relations_excluded
      << '\n';
  out << "\nrelation\tpositives\tROC-AUC\tPR-AUC\tAP@50\n";
  for (size_t r = 0; r < m.per_relation_auroc.size(); ++r) {
    out << (r < class_names.size() ? class_names[r] : std::to_string(r)) << '\t'
        << m.per_relation_positives[r] << '\t' << 100.0 * m.per_relation_auroc[r] << '\t'
        << 100.0 * m.per_relation_auprc[r] << '\t' << 100.0 * m.per_relation_ap50[r]
        << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace knowddi
