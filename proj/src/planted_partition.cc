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

#include "hogs/planted_partition.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "hogs/errors.h"
#include "hogs/random.h"

namespace hogs {

GraphDataset generate_planted_partition(const PlantedPartitionSpec& spec) {
  const std::size_t n = spec.node_count;
  std::vector<std::size_t> sizes = spec.class_sizes;
  if (sizes.empty()) {
    if (spec.class_count == 0) throw ConfigError("planted partition needs at least one class");
    sizes.assign(spec.class_count, n / spec.class_count);
    for (std::size_t k = 0; k < n % spec.class_count; ++k) ++sizes[k];
  }
  if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != n) {
    throw ConfigError("class sizes must sum to node_count");
  }
  if (spec.words_per_node > spec.feature_dim || spec.topic_words > spec.feature_dim) {
    throw ConfigError("word counts exceed feature dimension");
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  if (spec.edge_count > max_edges) throw ConfigError("too many edges requested");

  KeyedRng rng(spec.seed, 0, StreamTag::kSynthetic);

  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < sizes.size(); ++c) labels.insert(labels.end(), sizes[c], static_cast<int>(c));
  for (std::size_t k = n; k > 1; --k) std::swap(labels[k - 1], labels[rng.below(k)]);

  std::vector<std::vector<NodeId>> members(sizes.size());
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(static_cast<NodeId>(i));

  std::set<Edge> edges;
  std::size_t guard = 0;
  while (edges.size() < spec.edge_count) {
    if (++guard > 1000 * (spec.edge_count + 1)) throw ConfigError("cannot place requested edges");
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto& own = members[labels[u]];
    NodeId v;
    if (rng.bernoulli(spec.homophily)) {
      if (own.size() < 2) continue;
      v = own[rng.below(own.size())];
    } else {
      if (own.size() == n) continue;
      do {
        v = static_cast<NodeId>(rng.below(n));
      } while (labels[v] == labels[u]);
    }
    if (u == v) continue;
    edges.insert(Edge::make(u, v));
  }

  const std::size_t d = spec.feature_dim;
  std::vector<std::vector<std::size_t>> topics(sizes.size());
  std::vector<std::size_t> vocab(d);
  std::iota(vocab.begin(), vocab.end(), std::size_t{0});
  for (auto& topic : topics) {
    for (std::size_t k = 0; k < spec.topic_words; ++k) {
      std::swap(vocab[k], vocab[k + rng.below(d - k)]);
    }
    topic.assign(vocab.begin(), vocab.begin() + static_cast<std::ptrdiff_t>(spec.topic_words));
  }
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& topic = topics[labels[i]];
    std::size_t placed = 0;
    while (placed < spec.words_per_node) {
      std::size_t word = (!topic.empty() && rng.bernoulli(spec.topic_fraction))
                             ? topic[rng.below(topic.size())]
                             : rng.below(d);
      double& cell = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(word));
      if (cell == 0.0) {
        cell = 1.0;
        ++placed;
      } else if (spec.words_per_node > topic.size() && placed >= topic.size()) {
        // Topic exhausted; fall back to the global vocabulary.
        word = rng.below(d);
        double& other = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(word));
        if (other == 0.0) {
          other = 1.0;
          ++placed;
        }
      }
    }
  }
  return GraphDataset(n, std::vector<Edge>(edges.begin(), edges.end()), std::move(x),
                      std::move(labels), FeatureRange{0.0, 1.0});
}

PlantedPartitionSpec cora_shaped_spec(std::uint64_t seed) {
  PlantedPartitionSpec spec;
  spec.node_count = 2708;
  spec.class_sizes = {351, 217, 418, 818, 426, 298, 180};
  spec.class_count = 7;
  spec.edge_count = 5278;
  spec.homophily = 0.81;
  spec.feature_dim = 1433;
  spec.words_per_node = 18;
  spec.topic_words = 100;
  spec.topic_fraction = 0.5;
  spec.seed = seed;
  return spec;
}

}  // namespace hogs
