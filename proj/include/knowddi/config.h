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

#ifndef KNOWDDI_CONFIG_H_
#define KNOWDDI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace knowddi {

enum class Task { kMulticlass, kMultilabel };

// Which pair subgraph feeds the learner. Only the two knowledge modes learn
// structure; the others propagate over their fixed, normalised edges.
enum class SubgraphMode {
  kRandom,
  kEnclosing,
  kDrugFlow,
  kKnowledge,
  kKnowledgeNoResemble,
};

std::string_view ToString(Task task);
std::string_view ToString(SubgraphMode mode);
Task ParseTask(std::string_view text);
SubgraphMode ParseSubgraphMode(std::string_view text);

// Every hyperparameter of a run. Serialised as flat key=value text.
struct RunConfig {
  // Subgraph extraction.
  int hops = 2;
  int max_path_length = 4;
  size_t node_cap = 256;
  SubgraphMode subgraph_mode = SubgraphMode::kKnowledge;
  size_t random_subgraph_size = 16;

  // Model.
  int layers = 2;
  size_t dim = 32;
  int iterations = 3;
  double alpha = 0.5;
  double gamma = 0.1;
  double dropout = 0.2;

  // Optimisation.
  double learning_rate = 5e-3;
  double weight_decay = 1e-5;
  int max_epochs = 50;
  int patience = 10;
  size_t batch_size = 256;
  bool mean_reduction = false;
  bool resample_negatives = true;

  Task task = Task::kMulticlass;
  uint64_t seed = 0;
  double kg_fraction = 1.0;

  // Explaining paths.
  size_t max_paths = 20;
  bool pad_identity = false;

  // Throws DataError on an unknown key or unparsable value.
  void Set(std::string_view key, std::string_view value);
  // Throws DataError when a value is out of range.
  void Validate() const;
  std::string ToText() const;
  std::map<std::string, std::string> ToMap() const;

  static RunConfig FromText(std::string_view text);
  static RunConfig FromFile(const std::filesystem::path& path);

  bool operator==(const RunConfig&) const = default;
};

}  // namespace knowddi

#endif  // KNOWDDI_CONFIG_H_
