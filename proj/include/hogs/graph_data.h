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

#ifndef HOGS_GRAPH_DATA_H_
#define HOGS_GRAPH_DATA_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hogs/bit_vector.h"
#include "hogs/matrix.h"

namespace hogs {

using NodeId = std::uint32_t;

// Unordered node pair stored canonically with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge make(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct FeatureRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Immutable attributed graph. Construction validates every invariant:
// edges are canonical, unique and free of self-pairs; features lie inside
// the declared range; each node carries one label in [0, class_count).
class GraphDataset {
 public:
  GraphDataset(std::size_t node_count, std::vector<Edge> edges, Matrix features,
               std::vector<int> labels, FeatureRange range);

  std::size_t node_count() const { return node_count_; }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t class_count() const { return class_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  FeatureRange feature_range() const { return range_; }

  // Sorted neighbor ids of node i.
  std::span<const NodeId> neighbors(NodeId i) const;
  std::size_t degree(NodeId i) const { return neighbors(i).size(); }

  // One-hot n x c label matrix.
  Matrix one_hot_labels() const;

 private:
  std::size_t node_count_;
  std::size_t class_count_ = 0;
  std::vector<Edge> edges_;
  Matrix features_;
  std::vector<int> labels_;
  FeatureRange range_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
};

// Canonicalizes an arbitrary pair list: orders each pair, drops self-pairs
// and duplicates, sorts.
std::vector<Edge> canonical_edges(std::vector<Edge> pairs);

struct LoadOptions {
  // Overrides the (min, max) inference of the feature range.
  std::optional<FeatureRange> feature_range;
  // Fixes d when trailing feature columns are all zero in a sparse file.
  std::optional<std::size_t> feature_dim;
};

// Reads the three text files. Node count is the number of label rows;
// feature format (dense CSV or sparse triplets) is detected per file.
GraphDataset load_dataset(const std::filesystem::path& feature_path,
                          const std::filesystem::path& edge_path,
                          const std::filesystem::path& label_path,
                          const LoadOptions& options = {});

enum class FeatureFormat { kDenseCsv, kSparseTriplets };

void write_edges(const std::filesystem::path& path, std::span<const Edge> edges);
void write_labels(const std::filesystem::path& path, std::span<const int> labels);
void write_features(const std::filesystem::path& path, const Matrix& features,
                    FeatureFormat format);

std::vector<Edge> read_edges(const std::filesystem::path& path);

// File names used by save_dataset inside a directory.
struct DatasetFiles {
  std::filesystem::path features;
  std::filesystem::path edges;
  std::filesystem::path labels;
  std::filesystem::path metadata;

  static DatasetFiles in(const std::filesystem::path& dir);
};

// Writes edges, features (sparse triplets unless dense is requested) and
// labels into dir. Feature values are printed in shortest round-trip form.
DatasetFiles save_dataset(const GraphDataset& ds, const std::filesystem::path& dir,
                          FeatureFormat format = FeatureFormat::kSparseTriplets);

GraphDataset load_dataset(const DatasetFiles& files, const LoadOptions& options = {});

enum class Role : std::uint8_t { kTrain = 0, kValidation = 1, kTest = 2 };

struct SplitRatios {
  double train = 0.5;
  double validation = 0.25;
  double test = 0.25;
};

struct SplitAssignment {
  std::vector<Role> roles;
  std::uint64_t seed = 0;

  std::vector<NodeId> nodes_with(Role role) const;
  std::array<std::size_t, 3> counts() const;
};

// Uniform random partition. Validation and test sizes are round(n * ratio),
// train takes the remainder.
SplitAssignment split_nodes(const GraphDataset& ds, const SplitRatios& ratios,
                            std::uint64_t seed);
SplitAssignment split_nodes(std::size_t node_count, const SplitRatios& ratios,
                            std::uint64_t seed);

// Bit j is set iff {i, j} is an edge.
BitVector adjacency_row(const GraphDataset& ds, NodeId i);

}  // namespace hogs

#endif  // HOGS_GRAPH_DATA_H_
