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

#include "hogs/pipeline.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "hogs/collection.h"
#include "hogs/errors.h"
#include "hogs/features.h"
#include "hogs/ldp.h"
#include "hogs/text_io.h"

namespace hogs {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs fn, rethrowing library errors tagged with the phase name.
template <typename Fn>
auto in_phase(const char* phase, Fn&& fn) {
  try {
    return fn();
  } catch (const PhaseError&) {
    throw;
  } catch (const std::exception& e) {
    throw PhaseError(phase, e.what());
  }
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

nlohmann::json stats_json(const GraphStats& s) {
  nlohmann::json j = {{"edges", s.edges},
                      {"mean_degree", s.mean_degree}};
  j["homophily"] = s.homophily ? nlohmann::json(*s.homophily) : nlohmann::json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.features_path = j.value("features", std::string());
  cfg.edges_path = j.value("edges", std::string());
  cfg.labels_path = j.value("labels", std::string());
  cfg.dataset_dir = j.value("dataset_dir", std::string());
  cfg.epsilon = j.at("epsilon");
  cfg.delta = j.at("delta");
  cfg.tau = j.at("tau");
  cfg.l = j.at("l");
  cfg.variant = parse_variant(j.at("variant").get<std::string>());
  cfg.public_features = j.value("public_features", false);
  cfg.repeats = j.at("repeats");
  cfg.master_seed = j.at("seed");
  cfg.block_rows = j.value("block_rows", cfg.block_rows);
  cfg.threads = j.value("threads", cfg.threads);
  const auto& s = j.at("split");
  cfg.split = {s.at(0), s.at(1), s.at(2)};
  const auto& g = j.at("gnn");
  cfg.gnn.learning_rate = g.at("lr");
  cfg.gnn.weight_decay = g.at("weight_decay");
  cfg.gnn.dropout = g.at("dropout");
  cfg.gnn.max_epochs = g.at("max_epochs");
  cfg.gnn.patience = g.at("patience");
  cfg.gnn.hidden_dim = g.at("hidden");
  return cfg;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kHogs:
      return "hogs";
    case Variant::kNoTr:
      return "no_tr";
    case Variant::kNoFr:
      return "no_fr";
    case Variant::kKpropK1:
      return "kprop_k1";
    case Variant::kKpropK2:
      return "kprop_k2";
    case Variant::kNonprivate:
      return "nonprivate";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::kHogs, Variant::kNoTr, Variant::kNoFr, Variant::kKpropK1,
                    Variant::kKpropK2, Variant::kNonprivate}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (variant != Variant::kNonprivate && !(epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive for private variants");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (l < 0) throw ConfigError("l must be non-negative");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (!(gnn.learning_rate >= 0.0) || !(gnn.weight_decay >= 0.0)) {
    throw ConfigError("learning rate and weight decay must be non-negative");
  }
  if (!(gnn.dropout >= 0.0 && gnn.dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (gnn.max_epochs < 1 || gnn.patience < 1 || gnn.hidden_dim < 1) {
    throw ConfigError("max_epochs, patience and hidden must be positive");
  }
  if (block_rows < 1) throw ConfigError("block_rows must be positive");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"features", cfg.features_path.string()},
          {"edges", cfg.edges_path.string()},
          {"labels", cfg.labels_path.string()},
          {"dataset_dir", cfg.dataset_dir.string()},
          {"epsilon", cfg.epsilon},
          {"delta", cfg.delta},
          {"tau", cfg.tau},
          {"l", cfg.l},
          {"variant", std::string(to_string(cfg.variant))},
          {"public_features", cfg.public_features},
          {"repeats", cfg.repeats},
          {"seed", cfg.master_seed},
          {"block_rows", cfg.block_rows},
          {"threads", cfg.threads},
          {"split", {cfg.split.train, cfg.split.validation, cfg.split.test}},
          {"gnn",
           {{"lr", cfg.gnn.learning_rate},
            {"weight_decay", cfg.gnn.weight_decay},
            {"dropout", cfg.gnn.dropout},
            {"max_epochs", cfg.gnn.max_epochs},
            {"patience", cfg.gnn.patience},
            {"hidden", cfg.gnn.hidden_dim}}}};
}

GraphDataset load_experiment_dataset(const ExperimentConfig& cfg) {
  if (!cfg.dataset_dir.empty()) return load_dataset(DatasetFiles::in(cfg.dataset_dir));
  if (cfg.features_path.empty() || cfg.edges_path.empty() || cfg.labels_path.empty()) {
    throw ConfigError("dataset paths are not configured");
  }
  return load_dataset(cfg.features_path, cfg.edges_path, cfg.labels_path);
}

std::optional<double> edge_homophily(const SyntheticTopology& topology,
                                     std::span<const int> labels) {
  std::size_t eligible = 0, same = 0;
  for (const Edge& e : topology.edges) {
    if (e.u >= labels.size() || e.v >= labels.size()) continue;
    if (labels[e.u] < 0 || labels[e.v] < 0) continue;
    ++eligible;
    if (labels[e.u] == labels[e.v]) ++same;
  }
  if (eligible == 0) return std::nullopt;
  return static_cast<double>(same) / static_cast<double>(eligible);
}

GraphStats graph_stats(const SyntheticTopology& topology, std::span<const int> labels) {
  GraphStats s;
  s.edges = topology.edges.size();
  s.homophily = edge_homophily(topology, labels);
  s.mean_degree = topology.node_count == 0 ? 0.0
                                           : 2.0 * static_cast<double>(s.edges) /
                                                 static_cast<double>(topology.node_count);
  return s;
}

SynthesizedGraph synthesize_from_round(const CollectionRound& round, const ExperimentConfig& cfg,
                                       const Matrix* public_features) {
  if (cfg.variant == Variant::kNonprivate) {
    throw ConfigError("the nonprivate variant does not consume noisy reports");
  }
  if (cfg.public_features && public_features == nullptr) {
    throw ConfigError("public_features needs the true feature matrix");
  }
  SynthesizedGraph out;
  auto t0 = Clock::now();
  TopologyResult reconstructed = in_phase("topology", [&] {
    const TopologyOptions options{cfg.block_rows, cfg.threads};
    return cfg.public_features ? reconstruct_topology(round, *public_features, cfg.tau, options)
                               : reconstruct_topology(round, cfg.tau, options);
  });
  out.topology = cfg.variant == Variant::kNoTr ? noisy_topology_or(round)
                                               : std::move(reconstructed.topology);
  out.timings.topology = elapsed_ms(t0);

  t0 = Clock::now();
  out.features = in_phase("features", [&]() -> Matrix {
    if (cfg.public_features) return *public_features;
    Matrix noisy = noisy_feature_matrix(round);
    switch (cfg.variant) {
      case Variant::kNoFr:
        return noisy;
      case Variant::kKpropK1:
        return kprop_aggregate(out.topology, noisy, 1);
      case Variant::kKpropK2:
        return kprop_aggregate(out.topology, noisy, 2);
      default:
        return reconstruct_features(reconstructed.posteriors, noisy, cfg.l).values;
    }
  });
  out.timings.features = elapsed_ms(t0);
  out.posteriors = std::move(reconstructed.posteriors);
  return out;
}

CollectionRound collect_round(const GraphDataset& ds, const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  return in_phase("collect", [&] {
    const BudgetSplit budget = split_budget(cfg.epsilon, cfg.public_features ? 0.0 : cfg.delta);
    return run_collection(ds, budget, seed, CollectionOptions{cfg.threads});
  });
}

SynthesizedGraph synthesize(const GraphDataset& ds, const ExperimentConfig& cfg,
                            std::uint64_t seed) {
  if (cfg.variant == Variant::kNonprivate) {
    SynthesizedGraph out;
    out.topology = topology_of(ds);
    out.features = ds.features();
    return out;
  }
  const auto t0 = Clock::now();
  const CollectionRound round = collect_round(ds, cfg, seed);
  const double collect_ms = elapsed_ms(t0);
  SynthesizedGraph out = synthesize_from_round(round, cfg, &ds.features());
  out.timings.collect = collect_ms;
  return out;
}

TrainResult train_on_graph(const SyntheticTopology& topology, const Matrix& features,
                           std::span<const int> labels, std::size_t class_count,
                           const ExperimentConfig& cfg, std::uint64_t seed) {
  return in_phase("train", [&] {
    const SplitAssignment split = split_nodes(labels.size(), cfg.split, seed);
    TrainConfig gnn = cfg.gnn;
    gnn.seed = seed;
    GcnModel model = GcnModel::initialize(normalize_adjacency(topology, labels.size()),
                                          static_cast<std::size_t>(features.cols()),
                                          gnn.hidden_dim, class_count, gnn.dropout, seed);
    return train(std::move(model), features, labels, split, gnn);
  });
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

RunReport run_pipeline(const ExperimentConfig& cfg, const GraphDataset& ds) {
  cfg.validate();
  const auto start = Clock::now();
  RunReport report;
  report.config = cfg;
  double edges = 0.0, degree = 0.0, homophily = 0.0;
  int homophily_count = 0;

  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = cfg.repeat_seed(r);
    SynthesizedGraph graph = synthesize(ds, cfg, seed);

    const auto t0 = Clock::now();
    const TrainResult trained =
        train_on_graph(graph.topology, graph.features, ds.labels(), ds.class_count(), cfg, seed);
    graph.timings.train = elapsed_ms(t0);

    report.accuracies.push_back(trained.metrics.test_acc);
    report.val_accuracies.push_back(trained.metrics.best_val_acc);
    const GraphStats stats = graph_stats(graph.topology, ds.labels());
    edges += static_cast<double>(stats.edges);
    degree += stats.mean_degree;
    if (stats.homophily) {
      homophily += *stats.homophily;
      ++homophily_count;
    }
    report.timings_ms.collect += graph.timings.collect;
    report.timings_ms.topology += graph.timings.topology;
    report.timings_ms.features += graph.timings.features;
    report.timings_ms.train += graph.timings.train;
  }
  const double reps = static_cast<double>(cfg.repeats);
  report.graph_stats.edges = static_cast<std::uint64_t>(std::llround(edges / reps));
  report.graph_stats.mean_degree = degree / reps;
  if (homophily_count > 0) report.graph_stats.homophily = homophily / homophily_count;
  report.mean = mean_of(report.accuracies);
  report.std = sample_std(report.accuracies);
  report.val_mean = mean_of(report.val_accuracies);
  report.total_ms = elapsed_ms(start);
  return report;
}

RunReport run_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  const GraphDataset ds = in_phase("load", [&] { return load_experiment_dataset(cfg); });
  return run_pipeline(cfg, ds);
}

GridResult grid_search(const ExperimentConfig& base, const GridSpec& grid,
                       const GraphDataset& ds) {
  if (grid.cell_repeats < 1) throw ConfigError("grid cells need at least one repeat");
  auto or_base = [](const auto& list, auto value) {
    using T = decltype(value);
    return list.empty() ? std::vector<T>{value} : std::vector<T>(list.begin(), list.end());
  };
  const auto deltas = or_base(grid.deltas, base.delta);
  const auto taus = or_base(grid.taus, base.tau);
  const auto ls = or_base(grid.ls, base.l);
  const auto lrs = or_base(grid.learning_rates, base.gnn.learning_rate);
  const auto wds = or_base(grid.weight_decays, base.gnn.weight_decay);
  const auto drops = or_base(grid.dropouts, base.gnn.dropout);

  GridResult result;
  for (double delta : deltas) {
    for (double tau : taus) {
      for (int l : ls) {
        for (double lr : lrs) {
          for (double wd : wds) {
            for (double drop : drops) {
              ExperimentConfig cfg = base;
              cfg.delta = delta;
              cfg.tau = tau;
              cfg.l = l;
              cfg.gnn.learning_rate = lr;
              cfg.gnn.weight_decay = wd;
              cfg.gnn.dropout = drop;
              cfg.repeats = grid.cell_repeats;
              const RunReport report = run_pipeline(cfg, ds);
              result.table.push_back({cfg, report.val_mean, report.mean});
            }
          }
        }
      }
    }
  }
  auto key = [](const GridCell& c) {
    return std::make_tuple(-c.mean_val, c.config.delta, c.config.tau, c.config.l,
                           c.config.gnn.learning_rate, c.config.gnn.weight_decay,
                           c.config.gnn.dropout);
  };
  const GridCell* best = &result.table.front();
  for (const GridCell& c : result.table) {
    if (key(c) < key(*best)) best = &c;
  }
  result.best = best->config;
  result.best.repeats = base.repeats;
  return result;
}

nlohmann::json to_json(const RunReport& report) {
  return {{"config", to_json(report.config)},
          {"accuracies", report.accuracies},
          {"val_accuracies", report.val_accuracies},
          {"mean", report.mean},
          {"std", report.std},
          {"val_mean", report.val_mean},
          {"graph_stats", stats_json(report.graph_stats)},
          {"timings_ms",
           {{"collect", report.timings_ms.collect},
            {"topology", report.timings_ms.topology},
            {"features", report.timings_ms.features},
            {"train", report.timings_ms.train}}},
          {"total_ms", report.total_ms}};
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.config = config_from_json(j.at("config"));
  r.accuracies = j.at("accuracies").get<std::vector<double>>();
  r.val_accuracies = j.value("val_accuracies", std::vector<double>{});
  r.mean = j.at("mean");
  r.std = j.at("std");
  r.val_mean = j.value("val_mean", 0.0);
  const auto& s = j.at("graph_stats");
  r.graph_stats.edges = s.at("edges").get<std::uint64_t>();
  r.graph_stats.mean_degree = s.at("mean_degree");
  if (!s.at("homophily").is_null()) r.graph_stats.homophily = s.at("homophily").get<double>();
  const auto& t = j.at("timings_ms");
  r.timings_ms = {t.at("collect"), t.at("topology"), t.at("features"), t.at("train")};
  r.total_ms = j.value("total_ms", 0.0);
  return r;
}

std::string format_report_table(const RunReport& report) {
  std::ostringstream out;
  char line[160];
  const ExperimentConfig& c = report.config;
  std::snprintf(line, sizeof line, "variant %-10s eps %-6g delta %-4g tau %-4g l %d  repeats %zu\n",
                std::string(to_string(c.variant)).c_str(), c.epsilon, c.delta, c.tau, c.l,
                report.accuracies.size());
  out << line;
  for (std::size_t r = 0; r < report.accuracies.size(); ++r) {
    std::snprintf(line, sizeof line, "  run %2zu  test %.4f\n", r, report.accuracies[r]);
    out << line;
  }
  std::snprintf(line, sizeof line, "  accuracy  %.2f +- %.2f %%\n", 100.0 * report.mean,
                100.0 * report.std);
  out << line;
  const GraphStats& s = report.graph_stats;
  std::snprintf(line, sizeof line, "  graph     edges %llu  mean degree %.3f  homophily ",
                static_cast<unsigned long long>(s.edges), s.mean_degree);
  out << line;
  if (s.homophily) {
    std::snprintf(line, sizeof line, "%.4f\n", *s.homophily);
    out << line;
  } else {
    out << "n/a\n";
  }
  const PhaseTimings& t = report.timings_ms;
  std::snprintf(line, sizeof line,
                "  time ms   collect %.0f  topology %.0f  features %.0f  train %.0f  total %.0f\n",
                t.collect, t.topology, t.features, t.train, report.total_ms);
  out << line;
  return out.str();
}

void emit_report(const RunReport& report, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out = text::open_output(path);
  out << to_json(report).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
  std::cout << format_report_table(report);
}

}  // namespace hogs
