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

#ifndef HOGS_PIPELINE_H_
#define HOGS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hogs/collection.h"
#include "hogs/gcn.h"
#include "hogs/graph_data.h"
#include "hogs/topology.h"
#include "json.hpp"

namespace hogs {

// hogs: full synthesis. no_tr: raw noisy adjacency (OR-symmetrized) in
// place of topology reconstruction. no_fr: noisy feature bits in place of
// feature reconstruction. kprop_k*: reconstructed topology with unweighted
// k-hop feature averaging. nonprivate: the true graph.
enum class Variant { kHogs, kNoTr, kNoFr, kKpropK1, kKpropK2, kNonprivate };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct ExperimentConfig {
  std::filesystem::path features_path;
  std::filesystem::path edges_path;
  std::filesystem::path labels_path;
  // When set, a dataset directory written by save_dataset (takes precedence
  // over the three paths).
  std::filesystem::path dataset_dir;

  double epsilon = 4.0;
  double delta = 0.5;
  double tau = 0.5;
  int l = 1;
  Variant variant = Variant::kHogs;
  // Features are public: the whole budget goes to adjacency bits, priors
  // and GCN inputs use the true features.
  bool public_features = false;
  TrainConfig gnn;
  int repeats = 10;
  std::uint64_t master_seed = 1;
  SplitRatios split;
  std::size_t block_rows = 256;
  unsigned threads = 1;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  // Seed of repeat r.
  std::uint64_t repeat_seed(int r) const { return master_seed + static_cast<std::uint64_t>(r); }
};

nlohmann::json to_json(const ExperimentConfig& cfg);

// Flat "key = value" text; '#' starts a comment.
ExperimentConfig load_config(const std::filesystem::path& path,
                             ExperimentConfig base = ExperimentConfig{});
// Applies one setting by key. Throws ConfigError for unknown keys.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

GraphDataset load_experiment_dataset(const ExperimentConfig& cfg);

// Fraction of edges whose endpoints share a label, over edges with both
// endpoints labelled (label >= 0). Empty when no edge qualifies.
std::optional<double> edge_homophily(const SyntheticTopology& topology,
                                     std::span<const int> labels);

struct GraphStats {
  std::uint64_t edges = 0;
  std::optional<double> homophily;
  double mean_degree = 0.0;
};

GraphStats graph_stats(const SyntheticTopology& topology, std::span<const int> labels);

struct PhaseTimings {
  double collect = 0.0;
  double topology = 0.0;
  double features = 0.0;
  double train = 0.0;

  double sum() const { return collect + topology + features + train; }
};

// The graph a curator would publish for one repeat.
struct SynthesizedGraph {
  SyntheticTopology topology;
  Matrix features;
  // Present for variants that run topology reconstruction.
  std::optional<LinkPosteriorSet> posteriors;
  PhaseTimings timings;
};

// Client phase of one repeat: every node perturbs its own data.
CollectionRound collect_round(const GraphDataset& ds, const ExperimentConfig& cfg,
                              std::uint64_t seed);

// Curator phase: builds the variant's topology and features from a complete
// round. public_features is required when cfg.public_features is set.
SynthesizedGraph synthesize_from_round(const CollectionRound& round, const ExperimentConfig& cfg,
                                       const Matrix* public_features = nullptr);

// Both phases; the nonprivate variant returns the true graph.
SynthesizedGraph synthesize(const GraphDataset& ds, const ExperimentConfig& cfg,
                            std::uint64_t seed);

// Splits, initializes and trains a GCN on a published graph, all keyed by
// seed.
TrainResult train_on_graph(const SyntheticTopology& topology, const Matrix& features,
                           std::span<const int> labels, std::size_t class_count,
                           const ExperimentConfig& cfg, std::uint64_t seed);

struct RepeatOutcome {
  std::uint64_t seed = 0;
  GraphStats stats;
  TrainMetrics metrics;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<double> accuracies;
  std::vector<double> val_accuracies;
  double mean = 0.0;
  double std = 0.0;
  double val_mean = 0.0;
  // Averaged over repeats; the edge count is rounded.
  GraphStats graph_stats;
  PhaseTimings timings_ms;
  double total_ms = 0.0;
};

// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

// Runs collect, reconstruct, train and evaluate for every repeat. Phase
// failures are rethrown as PhaseError tagged with the phase name.
RunReport run_pipeline(const ExperimentConfig& cfg, const GraphDataset& ds);
RunReport run_pipeline(const ExperimentConfig& cfg);

struct GridSpec {
  // An empty list keeps the base configuration's value.
  std::vector<double> deltas;
  std::vector<double> taus;
  std::vector<int> ls;
  std::vector<double> learning_rates;
  std::vector<double> weight_decays;
  std::vector<double> dropouts;
  int cell_repeats = 5;
};

struct GridCell {
  ExperimentConfig config;
  double mean_val = 0.0;
  double mean_test = 0.0;
};

struct GridResult {
  ExperimentConfig best;
  std::vector<GridCell> table;
};

// Picks the cell with the highest mean validation accuracy. Ties go to
// smaller delta, then tau, then l, then learning rate, weight decay and
// dropout.
GridResult grid_search(const ExperimentConfig& base, const GridSpec& grid,
                       const GraphDataset& ds);

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
std::string format_report_table(const RunReport& report);

// Writes the JSON report to path and the table to standard output.
void emit_report(const RunReport& report, const std::filesystem::path& path);

}  // namespace hogs

#endif  // HOGS_PIPELINE_H_
