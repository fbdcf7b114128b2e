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

#include "hogs/features.h"

#include <numeric>

#include "hogs/errors.h"

namespace hogs {

PotentialNeighborIndex::PotentialNeighborIndex(std::size_t node_count,
                                               std::vector<std::size_t> offsets,
                                               std::vector<WeightedNeighbor> entries)
    : offsets_(std::move(offsets)), entries_(std::move(entries)) {
  if (offsets_.size() != node_count + 1 || offsets_.back() != entries_.size()) {
    throw ValidationError("inconsistent neighbor index layout");
  }
}

PotentialNeighborIndex build_neighbor_index(const LinkPosteriorSet& posteriors) {
  if (posteriors.storage_floor > kPotentialNeighborThreshold) {
    throw ConfigError("posterior set does not retain every pair at or above 0.5");
  }
  const std::size_t n = posteriors.node_count;
  std::vector<std::size_t> degree(n, 1);
  for (const PairPosterior& p : posteriors.pairs) {
    if (p.posterior >= kPotentialNeighborThreshold) {
      ++degree[p.i];
      ++degree[p.j];
    }
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets.begin() + 1);
  std::vector<WeightedNeighbor> entries(offsets.back());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) entries[cursor[i]++] = {static_cast<NodeId>(i), 1.0};
  // Pairs are sorted by (i, j). Filling every row's lower neighbors first
  // and upper neighbors second leaves each row ascending after self.
  for (const PairPosterior& p : posteriors.pairs) {
    if (p.posterior < kPotentialNeighborThreshold) continue;
    entries[cursor[p.j]++] = {p.i, p.posterior};
  }
  for (const PairPosterior& p : posteriors.pairs) {
    if (p.posterior < kPotentialNeighborThreshold) continue;
    entries[cursor[p.i]++] = {p.j, p.posterior};
  }
  return PotentialNeighborIndex(n, std::move(offsets), std::move(entries));
}

Matrix weighted_aggregate(const PotentialNeighborIndex& index, const Matrix& features) {
  if (static_cast<std::size_t>(features.rows()) != index.node_count()) {
    throw DimensionError("feature rows do not match the neighbor index");
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < index.node_count(); ++i) {
    auto row = out.row(static_cast<Eigen::Index>(i));
    row.setZero();
    double total = 0.0;
    for (const WeightedNeighbor& nb : index.neighbors(static_cast<NodeId>(i))) {
      row.noalias() += nb.weight * features.row(nb.node);
      total += nb.weight;
    }
    row /= total;
  }
  return out;
}

Matrix bits_to_matrix(std::span<const BitVector> rows) {
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DimensionError("bit rows differ in length");
    for (std::size_t k = 0; k < d; ++k) {
      if (rows[i].get(k)) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0;
    }
  }
  return x;
}

Matrix noisy_feature_matrix(const CollectionRound& round) {
  std::vector<BitVector> rows;
  rows.reserve(round.reports.size());
  for (const NoisyReport& r : round.reports) rows.push_back(r.noisy_features);
  return bits_to_matrix(rows);
}

ReconstructedFeatures reconstruct_features(const LinkPosteriorSet& posteriors,
                                           const Matrix& noisy_features, int iterations) {
  if (iterations < 0) throw ConfigError("feature reconstruction steps must be non-negative");
  ReconstructedFeatures out{noisy_features, 0};
  if (iterations == 0) return out;
  const PotentialNeighborIndex index = build_neighbor_index(posteriors);
  for (int pass = 0; pass < iterations; ++pass) {
    out.values = weighted_aggregate(index, out.values);
    ++out.iterations_applied;
  }
  return out;
}

Matrix kprop_aggregate(const SyntheticTopology& topology, const Matrix& features, int k) {
  if (k < 1) throw ConfigError("kprop needs k >= 1");
  const std::size_t n = topology.node_count;
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw DimensionError("feature rows do not match the topology");
  }
  std::vector<std::size_t> degree(n, 1);
  for (const Edge& e : topology.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets.begin() + 1);
  std::vector<WeightedNeighbor> entries(offsets.back());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) entries[cursor[i]++] = {static_cast<NodeId>(i), 1.0};
  for (const Edge& e : topology.edges) {
    entries[cursor[e.u]++] = {e.v, 1.0};
    entries[cursor[e.v]++] = {e.u, 1.0};
  }
  const PotentialNeighborIndex index(n, std::move(offsets), std::move(entries));
  Matrix out = features;
  for (int step = 0; step < k; ++step) out = weighted_aggregate(index, out);
  return out;
}

}  // namespace hogs
