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
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "knowddi/dataset.h"
#include "knowddi/errors.h"
#include "knowddi/losses.h"
#include "knowddi/model.h"
#include "knowddi/training.h"

namespace knowddi {
namespace {

namespace fs = std::filesystem;

Dataset SmallDataset(uint64_t seed = 3, size_t drugs = 14) {
  SyntheticOptions options;
  options.drugs = drugs;
  options.genes = 30;
  options.seed = seed;
  SyntheticData syn = GenerateSynthetic(options);
  SplitSet split = SplitDdi(syn.ddi, SplitRatios{}, 0);
  return BuildDataset(std::move(syn.vocab), std::move(split), syn.kg);
}

RunConfig SmallConfig() {
  RunConfig config;
  config.dim = 6;
  config.iterations = 2;
  config.node_cap = 32;
  config.dropout = 0.0;
  config.batch_size = 8;
  return config;
}

TEST(LossTest, UniformFourClassIsLogFour) {
  Tape tape;
  Var p = tape.Constant(Tensor(1, 4, 0.25));
  Tensor y(1, 4);
  y(0, 2) = 1.0;
  EXPECT_NEAR(MulticlassLoss(p, y).value()[0], std::log(4.0), 1e-15);
}

TEST(LossTest, MatchesScalarLoops) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t b = 1 + rng() % 5, c = 2 + rng() % 4;
    Tensor p(b, c), y(b, c);
    std::vector<uint8_t> neg_bytes(b);
    for (size_t i = 0; i < b; ++i) {
      neg_bytes[i] = rng() % 3 == 0;
      for (size_t j = 0; j < c; ++j) {
        p(i, j) = unit(rng);
        y(i, j) = rng() % 2;
      }
    }
    double ce = 0.0, bce = 0.0;
    for (size_t i = 0; i < b; ++i) {
      for (size_t j = 0; j < c; ++j) {
        ce -= y(i, j) * std::log(p(i, j));
        bce -= neg_bytes[i] ? std::log(1.0 - p(i, j)) : y(i, j) * std::log(p(i, j));
      }
    }
    std::unique_ptr<bool[]> neg(new bool[b]);
    for (size_t i = 0; i < b; ++i) neg[i] = neg_bytes[i];
    Tape tape;
    EXPECT_NEAR(MulticlassLoss(tape.Constant(p), y).value()[0], ce, 1e-12);
    EXPECT_NEAR(MultilabelLoss(tape.Constant(p), y, std::span<const bool>(neg.get(), b))
                    .value()[0],
                bce, 1e-12);
  }
}

TEST(LossTest, ZeroProbabilityIsFloored) {
  Tape tape;
  Tensor y(1, 2);
  y(0, 0) = 1.0;
  const double loss = MulticlassLoss(tape.Constant(Tensor(1, 2, {0.0, 1.0})), y).value()[0];
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -std::log(kProbabilityFloor), 1e-9);
}

TEST(LossTest, ShapeMismatchThrows) {
  Tape tape;
  EXPECT_THROW(MulticlassLoss(tape.Constant(Tensor(1, 3, 0.3)), Tensor(1, 2)), ShapeError);
}

TEST(NegativeSamplingTest, TailsAreAdmissibleAndSeeded) {
  const std::vector<NodeId> drugs = {0, 1, 2, 3, 4, 5};
  const std::vector<FactTriplet> triples = {{0, 2, 1}, {0, 2, 3}, {4, 3, 5}, {1, 2, 0}};
  const std::set<FactTriplet> known(triples.begin(), triples.end());
  const auto a = SampleNegatives(triples, drugs, known, 9);
  const auto b = SampleNegatives(triples, drugs, known, 9);
  ASSERT_EQ(a.size(), triples.size());
  EXPECT_EQ(a, b);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].head, triples[i].head);
    EXPECT_EQ(a[i].relation, triples[i].relation);
    EXPECT_NE(a[i].tail, a[i].head);
    EXPECT_EQ(known.count(a[i]), 0u);
  }
}

TEST(NegativeSamplingTest, SaturatedPairsAreSkipped) {
  const std::vector<NodeId> drugs = {0, 1, 2};
  const std::vector<FactTriplet> triples = {{0, 2, 1}, {0, 2, 2}, {1, 2, 0}};
  const std::set<FactTriplet> known(triples.begin(), triples.end());
  size_t skipped = 0;
  const auto out = SampleNegatives(triples, drugs, known, 1, &skipped);
  EXPECT_EQ(skipped, 2u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].tail, 2u);
}

TEST(ArgMaxTest, TiesResolveToLowestIndex) {
  const std::vector<double> v = {0.2, 0.4, 0.4, 0.1};
  EXPECT_EQ(ArgMax(v), 1u);
  const std::vector<double> flat(5, 0.2);
  EXPECT_EQ(ArgMax(flat), 0u);
}

class ModelTest : public ::testing::Test {
 protected:
  ModelTest() : data_(SmallDataset()), model_(data_.network, SmallConfig()) {
    samples_ = BuildSamples(data_.network, data_.train, Task::kMulticlass);
    samples_.resize(std::min<size_t>(samples_.size(), 12));
  }
  Dataset data_;
  KnowDdiModel model_;
  std::vector<PairSample> samples_;
};

TEST_F(ModelTest, SmallStepAlongNegativeGradientLowersLoss) {
  ParameterSet grads = model_.params().ZerosLike();
  const double before = model_.Loss(samples_, &grads, nullptr, 1);
  KnowDdiModel stepped(data_.network, SmallConfig(), model_.params());
  for (size_t i = 0; i < grads.size(); ++i) {
    Tensor& p = stepped.params().value(i);
    for (size_t k = 0; k < p.size(); ++k) p[k] -= 1e-5 * grads.value(i)[k];
  }
  EXPECT_LT(stepped.Loss(samples_, nullptr, nullptr, 1), before);
}

TEST_F(ModelTest, LossIgnoresBatchOrder) {
  ParameterSet g1 = model_.params().ZerosLike(), g2 = g1;
  const double a = model_.Loss(samples_, &g1, nullptr, 1);
  std::vector<PairSample> shuffled = samples_;
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double b = model_.Loss(shuffled, &g2, nullptr, 1);
  EXPECT_NEAR(a, b, 1e-12 * std::fabs(a));
  for (size_t i = 0; i < g1.size(); ++i) {
    for (size_t k = 0; k < g1.value(i).size(); ++k) {
      EXPECT_NEAR(g1.value(i)[k], g2.value(i)[k], 1e-12);
    }
  }
}

TEST_F(ModelTest, ThreadCountDoesNotChangeBits) {
  ParameterSet g1 = model_.params().ZerosLike(), g4 = g1;
  const double a = model_.Loss(samples_, &g1, nullptr, 1);
  const double b = model_.Loss(samples_, &g4, nullptr, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(g1, g4);
}

TEST_F(ModelTest, UnknownLabelSuggestsNearbyNames) {
  const std::string real = data_.network.vocab().nodes.label(data_.network.drug_nodes()[0]);
  EXPECT_EQ(ResolveNode(data_.network, real), data_.network.drug_nodes()[0]);
  try {
    ResolveNode(data_.network, real + "x");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(real), std::string::npos);
  }
}

TEST(TrainingTest, EarlyStoppingKeepsBestEpoch) {
  const Dataset data = SmallDataset();
  RunConfig config = SmallConfig();
  config.max_epochs = 12;
  config.patience = 2;
  config.learning_rate = 0.05;
  const TrainResult r = Train(data, config);
  ASSERT_FALSE(r.history.empty());
  EXPECT_EQ(r.epochs_run, static_cast<int>(r.history.size()));
  double best = r.history[0].valid_loss;
  int best_epoch = r.history[0].epoch;
  for (const EpochRecord& e : r.history) {
    if (e.valid_loss < best) {
      best = e.valid_loss;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(r.best_valid_loss, best);
  EXPECT_EQ(r.best_epoch, best_epoch);
  if (r.early_stopped) {
    EXPECT_EQ(r.epochs_run - r.best_epoch, config.patience);
  } else {
    EXPECT_EQ(r.epochs_run, config.max_epochs);
  }
}

TEST(TrainingTest, SameSeedSameParameters) {
  const Dataset data = SmallDataset();
  RunConfig config = SmallConfig();
  config.max_epochs = 2;
  config.dropout = 0.3;
  EXPECT_EQ(Train(data, config).params, Train(data, config).params);
}

TEST(CheckpointTest, RoundTripAndCorruption) {
  const Dataset data = SmallDataset();
  RunConfig config = SmallConfig();
  config.max_epochs = 1;
  const TrainResult r = Train(data, config);
  const Checkpoint ck = MakeCheckpoint(data.network, config, r);
  const fs::path dir = fs::temp_directory_path() / "knowddi_checkpoint_test";
  fs::create_directories(dir);
  const fs::path path = dir / "model.bin";
  SaveCheckpoint(path, ck);
  const Checkpoint back = LoadCheckpoint(path);
  EXPECT_EQ(back.config, ck.config);
  EXPECT_EQ(back.params, ck.params);
  EXPECT_EQ(back.best_epoch, ck.best_epoch);
  EXPECT_NO_THROW(CheckCompatible(back, data.network));
  EXPECT_THROW(CheckCompatible(back, SmallDataset(3, 15).network), DataError);

  const auto size = fs::file_size(path);
  fs::resize_file(path, size / 2);
  EXPECT_THROW(LoadCheckpoint(path), DataError);
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a checkpoint";
  }
  EXPECT_THROW(LoadCheckpoint(path), DataError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace knowddi
