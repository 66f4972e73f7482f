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

#include "knowddi/training.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "knowddi/errors.h"
#include "knowddi/losses.h"
#include "knowddi/optimizer.h"

namespace knowddi {
namespace {

namespace fs = std::filesystem;

constexpr char kMagic[8] = {'K', 'N', 'O', 'W', 'D', 'D', 'I', '\0'};

// Distinct stream per (seed, purpose, epoch).
std::mt19937_64 StreamRng(uint64_t seed, uint64_t purpose, uint64_t epoch) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(purpose), static_cast<uint32_t>(epoch)};
  return std::mt19937_64(seq);
}

uint64_t StreamSeed(uint64_t seed, uint64_t purpose, uint64_t epoch) {
  return StreamRng(seed, purpose, epoch)();
}

enum Purpose : uint64_t { kShuffle = 1, kNegatives = 2, kDropout = 3, kEvalNegatives = 4 };

void DumpBatch(const fs::path& dir, const CombinedNetwork& net,
               std::span<const PairSample> batch, int epoch, size_t batch_index) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream out(dir / "nonfinite_batch.tsv");
  out << "# epoch=" << epoch << " batch=" << batch_index << '\n';
  for (const PairSample& s : batch) {
    out << net.vocab().nodes.label(s.head) << '\t' << net.vocab().nodes.label(s.tail) << '\t'
        << (s.negative ? "negative" : "positive");
    for (double y : s.label) out << '\t' << y;
    out << '\n';
  }
}

template <typename T>
void WriteLe(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadLe(std::istream& in, const fs::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("truncated checkpoint " + path.string());
  return value;
}

std::string ReadString(std::istream& in, size_t size, const fs::path& path) {
  if (size > (1u << 30)) throw DataError("corrupt checkpoint " + path.string());
  std::string s(size, '\0');
  in.read(s.data(), static_cast<std::streamsize>(size));
  if (!in) throw DataError("truncated checkpoint " + path.string());
  return s;
}

}  // namespace

std::set<FactTriplet> KnownTriples(const Dataset& data) {
  std::set<FactTriplet> known(data.train.begin(), data.train.end());
  known.insert(data.valid.begin(), data.valid.end());
  known.insert(data.test.begin(), data.test.end());
  return known;
}

std::vector<PairSample> MakeSamples(const Dataset& data, std::span<const FactTriplet> triples,
                                    Task task, uint64_t seed, size_t* skipped) {
  std::vector<PairSample> samples = BuildSamples(data.network, triples, task);
  if (task == Task::kMultilabel) {
    const std::vector<FactTriplet> negatives = SampleNegatives(
        triples, data.network.drug_nodes(), KnownTriples(data), seed, skipped);
    std::vector<PairSample> neg = BuildNegativeSamples(data.network, negatives);
    samples.insert(samples.end(), neg.begin(), neg.end());
  }
  return samples;
}

TrainResult Train(const Dataset& data, const RunConfig& config, const TrainOptions& options) {
  config.Validate();
  KnowDdiModel model(data.network, config);
  AdamOptimizer optimizer(model.params(), {config.learning_rate, 0.9, 0.999, 1e-8,
                                           config.weight_decay});
  const std::vector<PairSample> valid_samples =
      data.valid.empty()
          ? std::vector<PairSample>{}
          : MakeSamples(data, data.valid, config.task,
                        StreamSeed(config.seed, kNegatives, 1u << 30));
  std::mt19937_64 dropout_rng = StreamRng(config.seed, kDropout, 0);

  TrainResult result;
  result.params = model.params();
  result.best_valid_loss = std::numeric_limits<double>::infinity();
  int stale = 0;
  std::vector<PairSample> train_samples;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    if (epoch == 1 || (config.resample_negatives && config.task == Task::kMultilabel)) {
      const uint64_t neg_epoch = config.resample_negatives ? epoch : 1;
      train_samples = MakeSamples(data, data.train, config.task,
                                  StreamSeed(config.seed, kNegatives, neg_epoch),
                                  &record.negatives_skipped);
    }
    std::vector<size_t> order(train_samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng = StreamRng(config.seed, kShuffle, epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    size_t batch_index = 0;
    for (size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const size_t end = std::min(order.size(), begin + config.batch_size);
      std::vector<PairSample> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) batch.push_back(train_samples[order[i]]);
      ParameterSet grads = model.params().ZerosLike();
      const double loss = model.Loss(batch, &grads, &dropout_rng, options.threads);
      if (!std::isfinite(loss) || !grads.AllFinite()) {
        DumpBatch(options.diagnostics_dir, data.network, batch, epoch, batch_index);
        std::ostringstream msg;
        msg << "non-finite loss in epoch " << epoch << " batch " << batch_index;
        if (!options.diagnostics_dir.empty()) {
          msg << "; batch dumped to "
              << (options.diagnostics_dir / "nonfinite_batch.tsv").string();
        }
        throw NumericalError(msg.str());
      }
      record.train_loss += loss;
      optimizer.Step(model.params(), grads);
    }
    record.valid_loss = valid_samples.empty()
                            ? record.train_loss
                            : model.Loss(valid_samples, nullptr, nullptr, options.threads);
    if (!std::isfinite(record.valid_loss)) {
      throw NumericalError("non-finite validation loss in epoch " + std::to_string(epoch));
    }
    result.history.push_back(record);
    result.epochs_run = epoch;
    if (options.on_epoch) options.on_epoch(record);
    if (record.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = record.valid_loss;
      result.best_epoch = epoch;
      result.params = model.params();
      stale = 0;
    } else if (++stale >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

void SaveCheckpoint(const fs::path& path, const Checkpoint& checkpoint) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WriteLe<uint32_t>(out, kCheckpointVersion);
  const std::string config = checkpoint.config.ToText();
  WriteLe<uint64_t>(out, config.size());
  out.write(config.data(), static_cast<std::streamsize>(config.size()));
  WriteLe<uint64_t>(out, checkpoint.node_digest);
  WriteLe<uint64_t>(out, checkpoint.relation_digest);
  WriteLe<uint32_t>(out, static_cast<uint32_t>(checkpoint.epochs_run));
  WriteLe<uint32_t>(out, static_cast<uint32_t>(checkpoint.best_epoch));
  WriteLe<double>(out, checkpoint.best_valid_loss);
  WriteLe<uint32_t>(out, static_cast<uint32_t>(checkpoint.params.size()));
  for (size_t i = 0; i < checkpoint.params.size(); ++i) {
    const std::string& name = checkpoint.params.name(i);
    const Tensor& t = checkpoint.params.value(i);
    WriteLe<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WriteLe<uint32_t>(out, static_cast<uint32_t>(t.rows()));
    WriteLe<uint32_t>(out, static_cast<uint32_t>(t.cols()));
    for (double v : t.values()) WriteLe<double>(out, v);
  }
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint LoadCheckpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw DataError(path.string() + " is not a checkpoint");
  }
  const auto version = ReadLe<uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  c.config = RunConfig::FromText(ReadString(in, ReadLe<uint64_t>(in, path), path));
  c.node_digest = ReadLe<uint64_t>(in, path);
  c.relation_digest = ReadLe<uint64_t>(in, path);
  c.epochs_run = static_cast<int>(ReadLe<uint32_t>(in, path));
  c.best_epoch = static_cast<int>(ReadLe<uint32_t>(in, path));
  c.best_valid_loss = ReadLe<double>(in, path);
  const auto count = ReadLe<uint32_t>(in, path);
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = ReadString(in, ReadLe<uint32_t>(in, path), path);
    const auto rows = ReadLe<uint32_t>(in, path);
    const auto cols = ReadLe<uint32_t>(in, path);
    if (static_cast<uint64_t>(rows) * cols > (1ull << 31)) {
      throw DataError("corrupt checkpoint " + path.string());
    }
    Tensor t(rows, cols);
    for (double& v : t.values()) v = ReadLe<double>(in, path);
    c.params.Add(std::move(name), std::move(t));
  }
  return c;
}

void CheckCompatible(const Checkpoint& checkpoint, const CombinedNetwork& net) {
  if (checkpoint.node_digest != net.vocab().nodes.Digest() ||
      checkpoint.relation_digest != net.vocab().relations.Digest()) {
    throw DataError(
        "checkpoint vocabulary does not match the dataset; use the data directory the "
        "checkpoint was trained on");
  }
}

Checkpoint MakeCheckpoint(const CombinedNetwork& net, const RunConfig& config,
                          const TrainResult& result) {
  return Checkpoint{config,
                    net.vocab().nodes.Digest(),
                    net.vocab().relations.Digest(),
                    result.epochs_run,
                    result.best_epoch,
                    result.best_valid_loss,
                    result.params};
}

uint64_t EvaluationNegativeSeed(uint64_t seed) { return StreamSeed(seed, kEvalNegatives, 0); }

MulticlassEvaluation EvaluateMulticlass(const KnowDdiModel& model,
                                        std::span<const FactTriplet> triples, int threads) {
  const CombinedNetwork& net = model.network();
  std::vector<std::pair<NodeId, NodeId>> pairs;
  MulticlassEvaluation eval;
  for (const FactTriplet& t : triples) {
    const auto cls = net.ClassIndex(t.relation);
    if (!cls) throw DataError("evaluation triple has a non-DDI relation");
    pairs.emplace_back(t.head, t.tail);
    eval.truth.push_back(*cls);
  }
  for (const auto& probs : model.PredictProbabilities(pairs, threads)) {
    eval.predicted.push_back(ArgMax(probs));
  }
  eval.metrics = ComputeClassificationMetrics(eval.truth, eval.predicted, net.num_classes());
  return eval;
}

RankingMetrics EvaluateMultilabel(const KnowDdiModel& model, const Dataset& data,
                                  std::span<const FactTriplet> triples, uint64_t seed,
                                  int threads) {
  const CombinedNetwork& net = model.network();
  const std::vector<FactTriplet> negatives =
      SampleNegatives(triples, net.drug_nodes(), KnownTriples(data), seed);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const FactTriplet& t : triples) pairs.emplace_back(t.head, t.tail);
  for (const FactTriplet& t : negatives) pairs.emplace_back(t.head, t.tail);
  const auto probs = model.PredictProbabilities(pairs, threads);
  std::vector<std::vector<double>> scores(net.num_classes());
  std::vector<std::vector<bool>> labels(net.num_classes());
  for (size_t i = 0; i < pairs.size(); ++i) {
    const FactTriplet& t = i < triples.size() ? triples[i] : negatives[i - triples.size()];
    const size_t cls = *net.ClassIndex(t.relation);
    scores[cls].push_back(probs[i][cls]);
    labels[cls].push_back(i < triples.size());
  }
  return ComputeRankingMetrics(scores, labels);
}

}  // namespace knowddi
