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

#ifndef HOGS_PLANTED_PARTITION_H_
#define HOGS_PLANTED_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hogs/graph_data.h"

namespace hogs {

// Homophilous random attributed graph: labelled blocks, a target fraction
// of intra-class edges, and binary bag-of-words features drawn partly from
// a per-class topic vocabulary.
struct PlantedPartitionSpec {
  std::size_t node_count = 200;
  // Empty means class_count equal-size classes.
  std::vector<std::size_t> class_sizes;
  std::size_t class_count = 4;
  std::size_t edge_count = 400;
  double homophily = 0.8;
  std::size_t feature_dim = 64;
  std::size_t words_per_node = 8;
  std::size_t topic_words = 16;
  // Probability that each drawn word comes from the node's class topic.
  double topic_fraction = 0.5;
  std::uint64_t seed = 1;
};

GraphDataset generate_planted_partition(const PlantedPartitionSpec& spec);

// Matches Cora's public shape: 2708 nodes, 1433 binary features, 7 classes
// with Cora's class sizes, 5278 undirected edges, edge homophily 0.81 and
// about 18 active words per node.
PlantedPartitionSpec cora_shaped_spec(std::uint64_t seed);

}  // namespace hogs

#endif  // HOGS_PLANTED_PARTITION_H_
