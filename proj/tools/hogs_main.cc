// Copyright 2026 The HoGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Each subcommand loads an optional config file,
// applies flag overrides on top and runs one stage of the pipeline.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hogs/collection.h"
#include "hogs/errors.h"
#include "hogs/features.h"
#include "hogs/gcn.h"
#include "hogs/graph_data.h"
#include "hogs/pipeline.h"
#include "hogs/text_io.h"
#include "hogs/topology.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace hogs {
namespace {

// Flag values kept as text and handed to apply_setting, so flags and
// config files share one parser.
struct Overrides {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::optional<std::string>>> settings;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    settings.emplace_back(key, std::nullopt);
    // settings never reallocates after setup, so the reference stays valid.
    app->add_option(flag, settings.back().second, help);
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config ? load_config(*config) : ExperimentConfig{};
    for (const auto& [key, value] : settings) {
      if (value) apply_setting(cfg, key, *value);
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
      apply_setting(cfg, text::trim(std::string_view(kv).substr(0, eq)),
                    text::trim(std::string_view(kv).substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
  }
};

void add_dataset_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--dataset-dir", "dataset_dir", "Directory written by ingest");
  o.add(app, "--features", "features", "Feature file (CSV rows or node/index/value triplets)");
  o.add(app, "--edges", "edges", "Edge list");
  o.add(app, "--labels", "labels", "Node labels (node, class)");
}

void add_privacy_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--epsilon", "epsilon", "Total privacy budget per node");
  o.add(app, "--delta", "delta", "Share of the budget spent on features");
  o.add(app, "--seed", "seed", "Master seed");
  o.add(app, "--threads", "threads", "Worker threads");
}

void add_synthesis_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--tau", "tau", "Posterior threshold for keeping an edge");
  o.add(app, "--l", "l", "Feature reconstruction passes");
  o.add(app, "--variant", "variant", "hogs, no_tr, no_fr, kprop_k1, kprop_k2 or nonprivate");
  o.add(app, "--public-features", "public_features", "Features are public (true/false)");
  o.add(app, "--block-rows", "block_rows", "Rows per Gram block");
}

void add_training_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--repeats", "repeats", "Independent repeats");
  o.add(app, "--lr", "lr", "Learning rate");
  o.add(app, "--weight-decay", "weight_decay", "Weight decay");
  o.add(app, "--dropout", "dropout", "Dropout rate");
  o.add(app, "--hidden", "hidden", "Hidden units");
  o.add(app, "--max-epochs", "max_epochs", "Epoch limit");
  o.add(app, "--patience", "patience", "Early-stopping patience");
  o.add(app, "--split", "split", "train,validation,test fractions");
}

void add_config_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", o.sets, "Extra key=value setting (repeatable)");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out = text::open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

void print_dataset_summary(const GraphDataset& ds) {
  const GraphStats s = graph_stats(topology_of(ds), ds.labels());
  std::printf("nodes %zu  features %zu  classes %zu  edges %llu  mean degree %.3f", ds.node_count(),
              ds.feature_dim(), ds.class_count(), static_cast<unsigned long long>(s.edges),
              s.mean_degree);
  if (s.homophily) std::printf("  homophily %.4f", *s.homophily);
  std::printf("\n");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (std::string_view item : text::split(text, ", ")) {
    double value = 0.0;
    if (!text::parse_number(item, value)) {
      throw ConfigError("bad list value '" + std::string(item) + "'");
    }
    out.push_back(value);
  }
  return out;
}

int cmd_ingest(const Overrides& o, const fs::path& out, const std::string& format) {
  const ExperimentConfig cfg = o.resolve();
  const GraphDataset ds = load_experiment_dataset(cfg);
  const FeatureFormat ff =
      format == "dense" ? FeatureFormat::kDenseCsv : FeatureFormat::kSparseTriplets;
  save_dataset(ds, out, ff);
  print_dataset_summary(ds);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_collect(const Overrides& o, const fs::path& out) {
  const ExperimentConfig cfg = o.resolve();
  const GraphDataset ds = load_experiment_dataset(cfg);
  const CollectionRound round = collect_round(ds, cfg, cfg.master_seed);
  fs::create_directories(out);
  write_report_stream(out / "reports.bin", round);
  std::printf("collected %zu reports  eps_adj %.6g  eps_feat %.6g\n", round.reports.size(),
              round.budget.epsilon_adj, round.budget.epsilon_feat);
  std::printf("wrote %s\n", (out / "reports.bin").string().c_str());
  return 0;
}

int cmd_synthesize(const Overrides& o, const fs::path& reports, const fs::path& out) {
  ExperimentConfig cfg = o.resolve();
  const CollectionRound round = read_report_stream(reports);
  // The budget is fixed by the reports, not by the flags.
  cfg.epsilon = round.budget.epsilon_total;
  cfg.delta = round.budget.delta;
  std::optional<GraphDataset> truth;
  if (cfg.public_features) truth = load_experiment_dataset(cfg);
  const SynthesizedGraph graph =
      synthesize_from_round(round, cfg, truth ? &truth->features() : nullptr);

  fs::create_directories(out);
  const DatasetFiles files = DatasetFiles::in(out);
  write_edges(files.edges, graph.topology.edges);
  write_features(files.features, graph.features, FeatureFormat::kDenseCsv);
  if (graph.posteriors) write_posteriors(out / "posteriors.bin", *graph.posteriors);
  nlohmann::json meta = {{"n", round.shape.node_count},
                         {"d", round.shape.feature_dim},
                         {"edges", graph.topology.edges.size()},
                         {"feature_lo", 0.0},
                         {"feature_hi", 1.0},
                         {"features_file", files.features.filename().string()},
                         {"config", to_json(cfg)}};
  if (!cfg.labels_path.empty() || !cfg.dataset_dir.empty()) {
    // Copy labels so the directory is a complete dataset for train.
    const fs::path labels =
        cfg.dataset_dir.empty() ? cfg.labels_path : DatasetFiles::in(cfg.dataset_dir).labels;
    fs::copy_file(labels, files.labels, fs::copy_options::overwrite_existing);
  }
  write_json(files.metadata, meta);
  std::printf("synthetic graph: %zu edges  mean degree %.3f\n", graph.topology.edges.size(),
              round.shape.node_count == 0
                  ? 0.0
                  : 2.0 * static_cast<double>(graph.topology.edges.size()) /
                        static_cast<double>(round.shape.node_count));
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_train(const Overrides& o, const fs::path& graph_dir, const fs::path& out) {
  const ExperimentConfig cfg = o.resolve();
  DatasetFiles files = DatasetFiles::in(graph_dir);
  if (!cfg.labels_path.empty()) files.labels = cfg.labels_path;
  const GraphDataset ds = load_dataset(files);
  const SyntheticTopology topology = topology_of(ds);

  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> accuracies;
  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = cfg.repeat_seed(r);
    const TrainResult result =
        train_on_graph(topology, ds.features(), ds.labels(), ds.class_count(), cfg, seed);
    runs.push_back(to_json(result.metrics));
    accuracies.push_back(result.metrics.test_acc);
    std::printf("  run %2d  seed %llu  epochs %3d  val %.4f  test %.4f\n", r,
                static_cast<unsigned long long>(seed), result.metrics.epochs_run,
                result.metrics.best_val_acc, result.metrics.test_acc);
  }
  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  const double sd = sample_std(accuracies);
  std::printf("accuracy %.2f +- %.2f %%\n", 100.0 * mean, 100.0 * sd);
  fs::create_directories(out);
  write_json(out / "metrics.json",
             {{"runs", runs}, {"accuracies", accuracies}, {"mean", mean}, {"std", sd}});
  return 0;
}

int cmd_run(const Overrides& o, const fs::path& out) {
  const RunReport report = run_pipeline(o.resolve());
  emit_report(report, out / "report.json");
  return 0;
}

struct GridFlags {
  std::string deltas, taus, ls, lrs, wds, dropouts;
  int cell_repeats = 5;
};

int cmd_grid(const Overrides& o, const GridFlags& flags, const fs::path& out) {
  const ExperimentConfig base = o.resolve();
  const GraphDataset ds = load_experiment_dataset(base);
  GridSpec grid;
  grid.deltas = parse_list(flags.deltas);
  grid.taus = parse_list(flags.taus);
  for (double l : parse_list(flags.ls)) {
    if (l != std::floor(l) || l < 0) throw ConfigError("--ls takes non-negative integers");
    grid.ls.push_back(static_cast<int>(l));
  }
  grid.learning_rates = parse_list(flags.lrs);
  grid.weight_decays = parse_list(flags.wds);
  grid.dropouts = parse_list(flags.dropouts);
  grid.cell_repeats = flags.cell_repeats;

  const GridResult result = grid_search(base, grid, ds);
  nlohmann::json table = nlohmann::json::array();
  for (const GridCell& cell : result.table) {
    table.push_back({{"delta", cell.config.delta},
                     {"tau", cell.config.tau},
                     {"l", cell.config.l},
                     {"lr", cell.config.gnn.learning_rate},
                     {"weight_decay", cell.config.gnn.weight_decay},
                     {"dropout", cell.config.gnn.dropout},
                     {"mean_val", cell.mean_val},
                     {"mean_test", cell.mean_test}});
    std::printf("  delta %-5g tau %-5g l %d  lr %-7g wd %-7g dropout %-4g  val %.4f\n",
                cell.config.delta, cell.config.tau, cell.config.l, cell.config.gnn.learning_rate,
                cell.config.gnn.weight_decay, cell.config.gnn.dropout, cell.mean_val);
  }
  fs::create_directories(out);
  write_json(out / "grid.json", {{"best", to_json(result.best)}, {"cells", table}});

  // Final evaluation of the selected cell with the configured repeat count.
  const RunReport report = run_pipeline(result.best, ds);
  emit_report(report, out / "report.json");
  return 0;
}

int cmd_report(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / "report.json" : path;
  std::ifstream in = text::open_input(file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string(), 0, e.what());
  }
  std::cout << format_report_table(report_from_json(j));
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Homophily-guided graph synthesis under local differential privacy"};
  app.require_subcommand(1);

  // One Overrides per subcommand; reserve so add() never reallocates.
  std::array<Overrides, 6> overrides;
  for (Overrides& o : overrides) o.settings.reserve(40);
  fs::path out = ".";
  fs::path reports, graph_dir, report_path;
  std::string format = "sparse";
  GridFlags grid_flags;

  CLI::App* ingest = app.add_subcommand("ingest", "Validate a dataset and write it in normal form");
  add_config_flags(ingest, overrides[0]);
  add_dataset_flags(ingest, overrides[0]);
  ingest->add_option("--out", out, "Output directory")->required();
  ingest->add_option("--format", format, "Feature file format")
      ->check(CLI::IsMember({"sparse", "dense"}));

  CLI::App* collect = app.add_subcommand("collect", "Run the client side and write noisy reports");
  add_config_flags(collect, overrides[1]);
  add_dataset_flags(collect, overrides[1]);
  add_privacy_flags(collect, overrides[1]);
  collect->add_option("--out", out, "Output directory");

  CLI::App* synth = app.add_subcommand("synthesize", "Build a synthetic graph from noisy reports");
  add_config_flags(synth, overrides[2]);
  add_dataset_flags(synth, overrides[2]);
  add_synthesis_flags(synth, overrides[2]);
  overrides[2].add(synth, "--threads", "threads", "Worker threads");
  synth->add_option("--reports", reports, "Report stream from collect")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Output directory");

  CLI::App* train_cmd = app.add_subcommand("train", "Train and score a GCN on a graph directory");
  add_config_flags(train_cmd, overrides[3]);
  overrides[3].add(train_cmd, "--labels", "labels", "Labels, if not inside the graph directory");
  overrides[3].add(train_cmd, "--seed", "seed", "Master seed");
  add_training_flags(train_cmd, overrides[3]);
  train_cmd->add_option("--graph", graph_dir, "Graph directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  train_cmd->add_option("--out", out, "Output directory");

  CLI::App* run = app.add_subcommand("run", "Full pipeline over repeated seeds");
  add_config_flags(run, overrides[4]);
  add_dataset_flags(run, overrides[4]);
  add_privacy_flags(run, overrides[4]);
  add_synthesis_flags(run, overrides[4]);
  add_training_flags(run, overrides[4]);
  run->add_option("--out", out, "Output directory");

  CLI::App* grid = app.add_subcommand("grid", "Validation grid search, then a final run");
  add_config_flags(grid, overrides[5]);
  add_dataset_flags(grid, overrides[5]);
  add_privacy_flags(grid, overrides[5]);
  add_synthesis_flags(grid, overrides[5]);
  add_training_flags(grid, overrides[5]);
  grid->add_option("--deltas", grid_flags.deltas, "Comma-separated delta values");
  grid->add_option("--taus", grid_flags.taus, "Comma-separated tau values");
  grid->add_option("--ls", grid_flags.ls, "Comma-separated reconstruction pass counts");
  grid->add_option("--lrs", grid_flags.lrs, "Comma-separated learning rates");
  grid->add_option("--weight-decays", grid_flags.wds, "Comma-separated weight decays");
  grid->add_option("--dropouts", grid_flags.dropouts, "Comma-separated dropout rates");
  grid->add_option("--cell-repeats", grid_flags.cell_repeats, "Repeats per grid cell");
  grid->add_option("--out", out, "Output directory");

  CLI::App* report = app.add_subcommand("report", "Print a saved run report");
  report->add_option("path", report_path, "report.json or its directory")
      ->required()
      ->check(CLI::ExistingPath);

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) return cmd_ingest(overrides[0], out, format);
  if (collect->parsed()) return cmd_collect(overrides[1], out);
  if (synth->parsed()) return cmd_synthesize(overrides[2], reports, out);
  if (train_cmd->parsed()) return cmd_train(overrides[3], graph_dir, out);
  if (run->parsed()) return cmd_run(overrides[4], out);
  if (grid->parsed()) return cmd_grid(overrides[5], grid_flags, out);
  return cmd_report(report_path);
}

}  // namespace
}  // namespace hogs

int main(int argc, char** argv) {
  try {
    return hogs::run_cli(argc, argv);
  } catch (const hogs::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hogs::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const hogs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
