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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "knowddi/config.h"
#include "knowddi/errors.h"

namespace knowddi {
namespace {

TEST(ConfigTest, DefaultsMatchTrainingRecipe) {
  const RunConfig c;
  EXPECT_EQ(c.hops, 2);
  EXPECT_EQ(c.max_path_length, 4);
  EXPECT_EQ(c.layers, 2);
  EXPECT_EQ(c.dim, 32u);
  EXPECT_EQ(c.iterations, 3);
  EXPECT_DOUBLE_EQ(c.dropout, 0.2);
  EXPECT_DOUBLE_EQ(c.learning_rate, 5e-3);
  EXPECT_DOUBLE_EQ(c.weight_decay, 1e-5);
  EXPECT_EQ(c.batch_size, 256u);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, TextRoundTrip) {
  RunConfig c;
  c.alpha = 0.3;
  c.gamma = 0.05;
  c.task = Task::kMultilabel;
  c.subgraph_mode = SubgraphMode::kDrugFlow;
  c.seed = 12345678901ULL;
  c.learning_rate = 1.0 / 3.0;
  c.pad_identity = true;
  EXPECT_EQ(RunConfig::FromText(c.ToText()), c);
}

TEST(ConfigTest, CommentsAndBlankLines) {
  const RunConfig c = RunConfig::FromText("# comment\n\n  hops = 3 \nalpha=0.25\n");
  EXPECT_EQ(c.hops, 3);
  EXPECT_DOUBLE_EQ(c.alpha, 0.25);
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_THROW(RunConfig::FromText("hopz=3\n"), DataError);
  EXPECT_THROW(RunConfig::FromText("hops\n"), DataError);
  EXPECT_THROW(RunConfig::FromText("hops=three\n"), DataError);
  EXPECT_THROW(RunConfig::FromText("pad_identity=maybe\n"), DataError);
  EXPECT_THROW(RunConfig::FromText("task=ranking\n"), DataError);
  RunConfig c;
  c.gamma = -0.5;
  EXPECT_THROW(c.Validate(), DataError);
  c = RunConfig();
  c.alpha = -0.1;
  EXPECT_THROW(c.Validate(), DataError);
  c = RunConfig();
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), DataError);
  EXPECT_THROW(RunConfig::FromFile("/nonexistent/knowddi.conf"), DataError);
}

TEST(ConfigTest, ModeNamesRoundTrip) {
  for (SubgraphMode m : {SubgraphMode::kRandom, SubgraphMode::kEnclosing, SubgraphMode::kDrugFlow,
                         SubgraphMode::kKnowledge, SubgraphMode::kKnowledgeNoResemble}) {
    EXPECT_EQ(ParseSubgraphMode(ToString(m)), m);
  }
  EXPECT_EQ(ParseTask(ToString(Task::kMultilabel)), Task::kMultilabel);
}

}  // namespace
}  // namespace knowddi
