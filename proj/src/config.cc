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

#include "knowddi/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "knowddi/errors.h"

namespace knowddi {

std::string_view ToString(Task task) {
  return task == Task::kMulticlass ? "multiclass" : "multilabel";
}

std::string_view ToString(SubgraphMode mode) {
  switch (mode) {
    case SubgraphMode::kRandom: return "random";
    case SubgraphMode::kEnclosing: return "enclosing";
    case SubgraphMode::kDrugFlow: return "drugflow";
    case SubgraphMode::kKnowledge: return "knowledge";
    case SubgraphMode::kKnowledgeNoResemble: return "knowledge-no-resemble";
  }
  return "knowledge";
}

Task ParseTask(std::string_view text) {
  if (text == "multiclass") return Task::kMulticlass;
  if (text == "multilabel") return Task::kMultilabel;
  throw DataError("unknown task '" + std::string(text) +
                  "' (expected multiclass or multilabel)");
}

SubgraphMode ParseSubgraphMode(std::string_view text) {
  for (SubgraphMode mode :
       {SubgraphMode::kRandom, SubgraphMode::kEnclosing, SubgraphMode::kDrugFlow,
        SubgraphMode::kKnowledge, SubgraphMode::kKnowledgeNoResemble}) {
    if (text == ToString(mode)) return mode;
  }
  throw DataError("unknown subgraph mode '" + std::string(text) + "'");
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("config: cannot parse '" + std::string(value) + "' for " +
                    std::string(key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw DataError("config: expected true/false for " + std::string(key));
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

void RunConfig::Set(std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "hops") hops = ParseNumber<int>(key, value);
  else if (key == "max_path_length") max_path_length = ParseNumber<int>(key, value);
  else if (key == "node_cap") node_cap = ParseNumber<size_t>(key, value);
  else if (key == "subgraph_mode") subgraph_mode = ParseSubgraphMode(value);
  else if (key == "random_subgraph_size") random_subgraph_size = ParseNumber<size_t>(key, value);
  else if (key == "layers") layers = ParseNumber<int>(key, value);
  else if (key == "dim") dim = ParseNumber<size_t>(key, value);
  else if (key == "iterations") iterations = ParseNumber<int>(key, value);
  else if (key == "alpha") alpha = ParseNumber<double>(key, value);
  else if (key == "gamma") gamma = ParseNumber<double>(key, value);
  else if (key == "dropout") dropout = ParseNumber<double>(key, value);
  else if (key == "learning_rate") learning_rate = ParseNumber<double>(key, value);
  else if (key == "weight_decay") weight_decay = ParseNumber<double>(key, value);
  else if (key == "max_epochs") max_epochs = ParseNumber<int>(key, value);
  else if (key == "patience") patience = ParseNumber<int>(key, value);
  else if (key == "batch_size") batch_size = ParseNumber<size_t>(key, value);
  else if (key == "mean_reduction") mean_reduction = ParseBool(key, value);
  else if (key == "resample_negatives") resample_negatives = ParseBool(key, value);
  else if (key == "task") task = ParseTask(value);
  else if (key == "seed") seed = ParseNumber<uint64_t>(key, value);
  else if (key == "kg_fraction") kg_fraction = ParseNumber<double>(key, value);
  else if (key == "max_paths") max_paths = ParseNumber<size_t>(key, value);
  else if (key == "pad_identity") pad_identity = ParseBool(key, value);
  else throw DataError("config: unknown key '" + std::string(key) + "'");
}

void RunConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("config: ") + what);
  };
  require(hops >= 1, "hops must be >= 1");
  require(max_path_length >= 1, "max_path_length must be >= 1");
  require(node_cap >= 2, "node_cap must be >= 2");
  require(layers >= 1, "layers must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(iterations >= 1, "iterations must be >= 1");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(patience >= 1, "patience must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(kg_fraction >= 0.0 && kg_fraction <= 1.0, "kg_fraction must lie in [0, 1]");
  require(max_paths >= 1, "max_paths must be >= 1");
}

std::map<std::string, std::string> RunConfig::ToMap() const {
  return {
      {"hops", std::to_string(hops)},
      {"max_path_length", std::to_string(max_path_length)},
      {"node_cap", std::to_string(node_cap)},
      {"subgraph_mode", std::string(ToString(subgraph_mode))},
      {"random_subgraph_size", std::to_string(random_subgraph_size)},
      {"layers", std::to_string(layers)},
      {"dim", std::to_string(dim)},
      {"iterations", std::to_string(iterations)},
      {"alpha", FormatDouble(alpha)},
      {"gamma", FormatDouble(gamma)},
      {"dropout", FormatDouble(dropout)},
      {"learning_rate", FormatDouble(learning_rate)},
      {"weight_decay", FormatDouble(weight_decay)},
      {"max_epochs", std::to_string(max_epochs)},
      {"patience", std::to_string(patience)},
      {"batch_size", std::to_string(batch_size)},
      {"mean_reduction", mean_reduction ? "true" : "false"},
      {"resample_negatives", resample_negatives ? "true" : "false"},
      {"task", std::string(ToString(task))},
      {"seed", std::to_string(seed)},
      {"kg_fraction", FormatDouble(kg_fraction)},
      {"max_paths", std::to_string(max_paths)},
      {"pad_identity", pad_identity ? "true" : "false"},
  };
}

std::string RunConfig::ToText() const {
  std::string out;
  for (const auto& [key, value] : ToMap()) out += key + "=" + value + "\n";
  return out;
}

RunConfig RunConfig::FromText(std::string_view text) {
  RunConfig config;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    config.Set(Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

RunConfig RunConfig::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromText(buffer.str());
}

}  // namespace knowddi
