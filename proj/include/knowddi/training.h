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

#ifndef KNOWDDI_TRAINING_H_
#define KNOWDDI_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "knowddi/config.h"
#include "knowddi/dataset.h"
#include "knowddi/metrics.h"
#include "knowddi/model.h"
#include "knowddi/parameters.h"

namespace knowddi {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  size_t negatives_skipped = 0;
};

struct TrainOptions {
  int threads = 1;
  std::function<void(const EpochRecord&)> on_epoch;
  // Where a non-finite batch is dumped before NumericalError is thrown.
  std::filesystem::path diagnostics_dir;
};

struct TrainResult {
  ParameterSet params;  // at the best validation loss
  int epochs_run = 0;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
  bool early_stopped = false;
  std::vector<EpochRecord> history;
};

// Every DDI triple of the dataset; negatives avoid all of them.
std::set<FactTriplet> KnownTriples(const Dataset& data);

// Multilabel training/validation samples: positives plus one negative per
// triple drawn with `seed`. Multiclass: positives only.
std::vector<PairSample> MakeSamples(const Dataset& data, std::span<const FactTriplet> triples,
                                    Task task, uint64_t seed, size_t* skipped = nullptr);

TrainResult Train(const Dataset& data, const RunConfig& config,
                  const TrainOptions& options = {});

struct Checkpoint {
  RunConfig config;
  uint64_t node_digest = 0;
  uint64_t relation_digest = 0;
  int epochs_run = 0;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
  ParameterSet params;
};

// Layout (all integers and floats little-endian):
//   8 bytes  magic "KNOWDDI\0"
//   u32      format version (1)
//   u64 n, n bytes   config text (key=value lines)
//   u64      node vocabulary digest
//   u64      relation vocabulary digest
//   u32 epochs_run, u32 best_epoch, f64 best_valid_loss
//   u32      parameter count, then per parameter:
//            u32 n, n bytes name, u32 rows, u32 cols, rows*cols f64 row-major
inline constexpr uint32_t kCheckpointVersion = 1;
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);
// DataError when the vocabulary digests differ from the network's.
void CheckCompatible(const Checkpoint& checkpoint, const CombinedNetwork& net);
Checkpoint MakeCheckpoint(const CombinedNetwork& net, const RunConfig& config,
                          const TrainResult& result);

// Test-time negatives use a seed distinct from every training epoch.
uint64_t EvaluationNegativeSeed(uint64_t seed);

struct MulticlassEvaluation {
  ClassificationMetrics metrics;
  std::vector<size_t> truth;
  std::vector<size_t> predicted;
};
MulticlassEvaluation EvaluateMulticlass(const KnowDdiModel& model,
                                        std::span<const FactTriplet> triples, int threads);

// Per relation r: the positive triples of r against their sampled
// negatives (h, r, w), scored by y_hat_r.
RankingMetrics EvaluateMultilabel(const KnowDdiModel& model, const Dataset& data,
                                  std::span<const FactTriplet> triples, uint64_t seed,
                                  int threads);

}  // namespace knowddi

#endif  // KNOWDDI_TRAINING_H_
