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

#include "knowddi/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "knowddi/config.h"
#include "knowddi/dataset.h"
#include "knowddi/errors.h"
#include "knowddi/explain.h"
#include "knowddi/metrics.h"
#include "knowddi/model.h"
#include "knowddi/oracles.h"
#include "knowddi/training.h"

namespace knowddi {
namespace {

namespace fs = std::filesystem;

// Flags shared by the subcommands that build a run configuration.
struct ConfigFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> task;
  std::optional<double> kg_fraction;
  std::optional<std::string> subgraph_mode;
  std::vector<std::string> overrides;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "random seed");
    app->add_option("--task", task, "multiclass or multilabel");
    app->add_option("--kg-fraction", kg_fraction, "fraction of KG triples to keep");
    app->add_option("--subgraph-mode", subgraph_mode,
                    "random | enclosing | drugflow | knowledge | knowledge-no-resemble");
    app->add_option("--set", overrides, "extra key=value override (repeatable)");
  }

  RunConfig Resolve() const {
    RunConfig config = config_path.empty() ? RunConfig{} : RunConfig::FromFile(config_path);
    for (const std::string& kv : overrides) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) throw DataError("--set expects key=value, got '" + kv + "'");
      config.Set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) config.seed = *seed;
    if (task) config.task = ParseTask(*task);
    if (kg_fraction) config.kg_fraction = *kg_fraction;
    if (subgraph_mode) config.subgraph_mode = ParseSubgraphMode(*subgraph_mode);
    config.Validate();
    return config;
  }
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

void EchoConfig(const fs::path& out_dir, const RunConfig& config,
                const std::vector<std::pair<std::string, std::string>>& manifest) {
  if (out_dir.empty()) return;
  WriteText(out_dir / "config.txt", config.ToText());
  std::ostringstream m;
  for (const auto& [k, v] : manifest) m << k << '=' << v << '\n';
  WriteText(out_dir / "manifest.txt", m.str());
}

std::pair<NodeId, NodeId> ParsePair(const CombinedNetwork& net, const std::string& text) {
  const size_t comma = text.find(',');
  if (comma == std::string::npos) throw DataError("pair must be HEAD,TAIL, got '" + text + "'");
  return {ResolveNode(net, text.substr(0, comma)), ResolveNode(net, text.substr(comma + 1))};
}

// The model keeps a pointer to the network, so the dataset lives on the heap.
struct LoadedModel {
  Checkpoint checkpoint;
  std::unique_ptr<Dataset> data;
  std::unique_ptr<KnowDdiModel> model;
};

LoadedModel LoadModel(const fs::path& checkpoint_path, const fs::path& data_dir) {
  LoadedModel loaded;
  loaded.checkpoint = LoadCheckpoint(checkpoint_path);
  const RunConfig& config = loaded.checkpoint.config;
  loaded.data = std::make_unique<Dataset>(
      LoadDataset(data_dir, config.kg_fraction, config.seed));
  CheckCompatible(loaded.checkpoint, loaded.data->network);
  loaded.model = std::make_unique<KnowDdiModel>(loaded.data->network, config,
                                                loaded.checkpoint.params);
  return loaded;
}

std::vector<std::string> ClassNames(const CombinedNetwork& net) {
  std::vector<std::string> names;
  for (RelationId r : net.ddi_relations()) names.push_back(net.vocab().relations.label(r));
  return names;
}

int DefaultThreads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"KnowDDI: drug-drug interaction prediction with knowledge subgraphs",
               "knowddi"};
  app.require_subcommand(1, 1);
  int threads = DefaultThreads();
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  // preprocess
  CLI::App* pre = app.add_subcommand("preprocess", "filter, split and leakage-filter raw triples");
  PreprocessOptions pre_opts;
  std::string pre_ddi, pre_kg, pre_out;
  bool synthetic = false;
  SyntheticOptions syn_opts;
  pre->add_option("--ddi", pre_ddi, "raw DDI triples (head<TAB>relation<TAB>tail)");
  pre->add_option("--kg", pre_kg, "raw KG triples");
  pre->add_option("--out-dir", pre_out, "dataset directory to create")->required();
  pre->add_option("--seed", pre_opts.seed, "split seed");
  pre->add_option("--rank-begin", pre_opts.rank_begin, "first DDI relation rank kept");
  pre->add_option("--rank-end", pre_opts.rank_end, "one past the last DDI relation rank kept");
  pre->add_flag("--one-relation-per-pair", pre_opts.one_relation_per_pair,
                "keep the first relation of each ordered pair");
  pre->add_flag("--synthetic", synthetic, "write the planted-rule synthetic dataset instead");
  pre->add_option("--synthetic-seed", syn_opts.seed, "generator seed for --synthetic");

  // train
  CLI::App* train = app.add_subcommand("train", "train a model and write a checkpoint");
  ConfigFlags train_flags;
  std::string train_data, train_out;
  train_flags.Register(train);
  train->add_option("--data-dir", train_data, "dataset directory")->required();
  train->add_option("--out-dir", train_out, "output directory")->required();

  // eval
  CLI::App* eval = app.add_subcommand("eval", "compute test metrics for a checkpoint");
  std::string eval_ckpt, eval_data, eval_out, eval_split = "test";
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
  eval->add_option("--data-dir", eval_data, "dataset directory")->required();
  eval->add_option("--out-dir", eval_out, "directory for metrics.txt and metrics.kv");
  eval->add_option("--split", eval_split, "train | valid | test")
      ->check(CLI::IsMember({"train", "valid", "test"}));

  // predict
  CLI::App* predict = app.add_subcommand("predict", "predict interactions for drug pairs");
  std::string pred_ckpt, pred_data, pred_pair, pred_file;
  predict->add_option("--checkpoint", pred_ckpt, "checkpoint file")->required();
  predict->add_option("--data-dir", pred_data, "dataset directory")->required();
  auto* pair_opt = predict->add_option("--pair", pred_pair, "HEAD,TAIL");
  auto* file_opt = predict->add_option("--pairs", pred_file, "file of HEAD<TAB>TAIL lines");
  pair_opt->excludes(file_opt);

  // explain
  CLI::App* explain = app.add_subcommand("explain", "explaining paths for a drug pair");
  std::string exp_ckpt, exp_data, exp_pair, exp_out;
  std::optional<size_t> exp_max_paths;
  bool exp_pad = false;
  explain->add_option("--checkpoint", exp_ckpt, "checkpoint file")->required();
  explain->add_option("--data-dir", exp_data, "dataset directory")->required();
  explain->add_option("--pair", exp_pair, "HEAD,TAIL")->required();
  explain->add_option("--out-dir", exp_out, "directory for paths.tsv and subgraph.dot");
  explain->add_option("--max-paths", exp_max_paths, "paths to report");
  explain->add_flag("--pad-identity", exp_pad, "pad paths with the tail self-loop");

  // selftest
  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle and gradient suites");
  uint64_t self_seed = 2026;
  selftest->add_option("--seed", self_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*pre) {
      if (synthetic) {
        const SyntheticData syn = GenerateSynthetic(syn_opts);
        const SplitSet split = SplitDdi(syn.ddi, pre_opts.ratios, pre_opts.seed);
        WriteDataset(pre_out, syn.vocab, split, syn.kg,
                     {{"source", "synthetic"},
                      {"synthetic_seed", std::to_string(syn_opts.seed)},
                      {"seed", std::to_string(pre_opts.seed)},
                      {"train", std::to_string(split.train.size())},
                      {"valid", std::to_string(split.valid.size())},
                      {"test", std::to_string(split.test.size())}});
        out << "synthetic dataset: " << syn.ddi.size() << " DDI triples, " << syn.kg.size()
            << " KG triples -> " << pre_out << '\n';
        return kExitOk;
      }
      if (pre_ddi.empty()) {
        err << "error: preprocess needs --ddi (or --synthetic)\n";
        return kExitUsage;
      }
      pre_opts.ddi_path = pre_ddi;
      pre_opts.kg_path = pre_kg;
      const PreprocessSummary s = Preprocess(pre_opts, pre_out);
      out << "DDI triples " << s.ddi_triples << " (train " << s.train << ", valid " << s.valid
          << ", test " << s.test << "); KG triples " << s.kg_triples << ", " << s.kg_removed
          << " drug-drug KG triples removed\n";
      return kExitOk;
    }

    if (*train) {
      const RunConfig config = train_flags.Resolve();
      const fs::path out_dir = train_out;
      fs::create_directories(out_dir);
      EchoConfig(out_dir, config,
                 {{"command", "train"}, {"data_dir", train_data},
                  {"threads", std::to_string(threads)}});
      const Dataset data = LoadDataset(train_data, config.kg_fraction, config.seed);
      out << "nodes " << data.network.num_nodes() << ", relations "
          << data.network.num_relations() << ", DDI classes " << data.network.num_classes()
          << ", train " << data.train.size() << ", valid " << data.valid.size() << '\n';
      std::ofstream log(out_dir / "training_log.tsv");
      log << "epoch\ttrain_loss\tvalid_loss\tnegatives_skipped\n" << std::setprecision(17);
      TrainOptions options;
      options.threads = threads;
      options.diagnostics_dir = out_dir;
      options.on_epoch = [&](const EpochRecord& r) {
        log << r.epoch << '\t' << r.train_loss << '\t' << r.valid_loss << '\t'
            << r.negatives_skipped << '\n';
        log.flush();
        out << "epoch " << r.epoch << "  train_loss " << r.train_loss << "  valid_loss "
            << r.valid_loss << '\n';
        if (r.negatives_skipped > 0) {
          err << "warning: " << r.negatives_skipped
              << " negatives skipped (head interacts with every drug)\n";
        }
      };
      const TrainResult result = Train(data, config, options);
      SaveCheckpoint(out_dir / "checkpoint.bin", MakeCheckpoint(data.network, config, result));
      out << "best epoch " << result.best_epoch << " of " << result.epochs_run
          << (result.early_stopped ? " (early stop)" : "") << ", valid loss "
          << result.best_valid_loss << "\ncheckpoint " << (out_dir / "checkpoint.bin").string()
          << '\n';
      return kExitOk;
    }

    if (*eval) {
      LoadedModel loaded = LoadModel(eval_ckpt, eval_data);
      const RunConfig& config = loaded.checkpoint.config;
      const auto& triples = eval_split == "train"   ? loaded.data->train
                            : eval_split == "valid" ? loaded.data->valid
                                                    : loaded.data->test;
      std::ostringstream report, kv;
      if (config.task == Task::kMulticlass) {
        const MulticlassEvaluation e =
            EvaluateMulticlass(*loaded.model, triples, threads);
        WriteReport(report, e.metrics, ClassNames(loaded.data->network));
        WriteKeyValues(kv, ToKeyValues(e.metrics));
      } else {
        const RankingMetrics m =
            EvaluateMultilabel(*loaded.model, *loaded.data, triples,
                               EvaluationNegativeSeed(config.seed), threads);
        if (m.relations_excluded > 0) {
          err << "warning: " << m.relations_excluded
              << " relations lack positives or negatives and were excluded\n";
        }
        WriteReport(report, m, ClassNames(loaded.data->network));
        WriteKeyValues(kv, ToKeyValues(m));
      }
      out << "split " << eval_split << " (" << triples.size() << " triples)\n" << report.str();
      if (!eval_out.empty()) {
        WriteText(fs::path(eval_out) / "metrics.txt", report.str());
        WriteText(fs::path(eval_out) / "metrics.kv", kv.str());
        EchoConfig(eval_out, config,
                   {{"command", "eval"}, {"checkpoint", eval_ckpt}, {"data_dir", eval_data},
                    {"split", eval_split}, {"threads", std::to_string(threads)}});
      }
      return kExitOk;
    }

    if (*predict) {
      LoadedModel loaded = LoadModel(pred_ckpt, pred_data);
      const CombinedNetwork& net = loaded.data->network;
      std::vector<std::pair<NodeId, NodeId>> pairs;
      if (!pred_pair.empty()) {
        pairs.push_back(ParsePair(net, pred_pair));
      } else if (!pred_file.empty()) {
        std::ifstream in(pred_file);
        if (!in) throw DataError("cannot open " + pred_file);
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#') continue;
          std::istringstream fields(line);
          std::string h, t;
          fields >> h >> t;
          pairs.push_back(ParsePair(net, h + "," + t));
        }
      } else {
        err << "error: predict needs --pair or --pairs\n";
        return kExitUsage;
      }
      const auto probs = loaded.model->PredictProbabilities(pairs, threads);
      const auto names = ClassNames(net);
      out << std::setprecision(6);
      for (size_t i = 0; i < pairs.size(); ++i) {
        out << net.vocab().nodes.label(pairs[i].first) << '\t'
            << net.vocab().nodes.label(pairs[i].second);
        if (loaded.checkpoint.config.task == Task::kMulticlass) {
          const size_t best = ArgMax(probs[i]);
          out << '\t' << names[best] << '\t' << probs[i][best];
        } else {
          for (size_t c = 0; c < names.size(); ++c) out << '\t' << names[c] << '=' << probs[i][c];
        }
        out << '\n';
      }
      return kExitOk;
    }

    if (*explain) {
      LoadedModel loaded = LoadModel(exp_ckpt, exp_data);
      const CombinedNetwork& net = loaded.data->network;
      const RunConfig& config = loaded.checkpoint.config;
      const auto [head, tail] = ParsePair(net, exp_pair);
      const KnowledgeSubgraph ks = loaded.model->Knowledge(head, tail);
      ExplainOptions options;
      options.max_path_length = config.max_path_length;
      options.max_paths = exp_max_paths.value_or(config.max_paths);
      options.pad_identity = exp_pad || config.pad_identity;
      const auto paths = EnumerateExplainingPaths(ks, options);
      std::ostringstream report;
      WritePathReport(report, ks, paths, net.vocab());
      out << report.str();
      if (paths.empty()) out << "no explaining path with positive strength\n";
      if (!exp_out.empty()) {
        WriteText(fs::path(exp_out) / "paths.tsv", report.str());
        WriteText(fs::path(exp_out) / "subgraph.dot", ExportDot(ks, paths, net.vocab()));
        EchoConfig(exp_out, config,
                   {{"command", "explain"}, {"checkpoint", exp_ckpt}, {"data_dir", exp_data},
                    {"pair", exp_pair}});
      }
      return kExitOk;
    }

    if (*selftest) {
      bool all = true;
      for (const oracles::SuiteResult& r :
           {oracles::GradientSuite(5, self_seed), oracles::SubgraphSuite(100, self_seed + 1),
            oracles::MetricSuite(50, self_seed + 2),
            oracles::StructureSuite(50, self_seed + 3)}) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "  cases=" << r.cases
            << "  max_error=" << r.max_error << "  " << r.detail << '\n';
        all = all && r.passed;
      }
      return all ? kExitOk : kExitNumerical;
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace knowddi
