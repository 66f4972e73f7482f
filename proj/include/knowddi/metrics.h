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

#ifndef KNOWDDI_METRICS_H_
#define KNOWDDI_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace knowddi {

struct ClassificationMetrics {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  double kappa = 0.0;
  std::vector<double> per_class_f1;
  std::vector<size_t> per_class_support;
};

// Macro-F1 averages over all `num_classes`; a class absent from both truth
// and prediction contributes 0. Throws DataError on empty input.
ClassificationMetrics ComputeClassificationMetrics(std::span<const size_t> truth,
                                                   std::span<const size_t> predicted,
                                                   size_t num_classes);

// Rank statistic with midrank credit for ties. NaN without both classes.
double Auroc(std::span<const double> scores, std::span<const bool> labels);
// Step integration sum_i (R_i - R_{i-1}) P_i over distinct thresholds.
double AveragePrecision(std::span<const double> scores, std::span<const bool> labels);
// Average precision over the top k (stable descending order), divided by
// min(#positives, k).
double AveragePrecisionAtK(std::span<const double> scores, std::span<const bool> labels,
                           size_t k = 50);

struct RankingMetrics {
  double auroc = 0.0;
  double auprc = 0.0;
  double ap_at_50 = 0.0;
  size_t relations_used = 0;
  size_t relations_excluded = 0;
  std::vector<double> per_relation_auroc;  // NaN for excluded relations
  std::vector<double> per_relation_auprc;
  std::vector<double> per_relation_ap50;
  std::vector<size_t> per_relation_positives;
};

// `scores[r]` and `labels[r]` hold the scored records of relation r.
// Relations with no positive or no negative are excluded and counted;
// the averages are unweighted over the remaining relations.
RankingMetrics ComputeRankingMetrics(const std::vector<std::vector<double>>& scores,
                                     const std::vector<std::vector<bool>>& labels);

// Flat metric name -> value map, including per-relation entries.
std::map<std::string, double> ToKeyValues(const ClassificationMetrics& m);
std::map<std::string, double> ToKeyValues(const RankingMetrics& m);
void WriteKeyValues(std::ostream& out, const std::map<std::string, double>& values);
void WriteReport(std::ostream& out, const ClassificationMetrics& m,
                 std::span<const std::string> class_names);
void WriteReport(std::ostream& out, const RankingMetrics& m,
                 std::span<const std::string> class_names);

}  // namespace knowddi

#endif  // KNOWDDI_METRICS_H_
