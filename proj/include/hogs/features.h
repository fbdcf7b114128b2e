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

#ifndef HOGS_FEATURES_H_
#define HOGS_FEATURES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hogs/bit_vector.h"
#include "hogs/matrix.h"
#include "hogs/topology.h"

namespace hogs {

inline constexpr double kPotentialNeighborThreshold = 0.5;

struct WeightedNeighbor {
  NodeId node = 0;
  double weight = 0.0;
};

// Per-node support for weighted aggregation: the node itself at weight 1
// followed by every j with posterior P_ij >= 0.5, ascending by j.
class PotentialNeighborIndex {
 public:
  PotentialNeighborIndex(std::size_t node_count, std::vector<std::size_t> offsets,
                         std::vector<WeightedNeighbor> entries);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::span<const WeightedNeighbor> neighbors(NodeId i) const {
    return std::span<const WeightedNeighbor>(entries_).subspan(offsets_[i],
                                                               offsets_[i + 1] - offsets_[i]);
  }
  std::size_t entry_count() const { return entries_.size(); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<WeightedNeighbor> entries_;
};

// Throws ConfigError if the set was built with a storage floor above 0.5,
// since pairs in [0.5, floor) would then be missing.
PotentialNeighborIndex build_neighbor_index(const LinkPosteriorSet& posteriors);

// Row i = sum_j w_ij x_j / sum_j w_ij over the node's support.
Matrix weighted_aggregate(const PotentialNeighborIndex& index, const Matrix& features);

struct ReconstructedFeatures {
  Matrix values;
  int iterations_applied = 0;
};

// Stacks bit rows into a real n x d matrix.
Matrix bits_to_matrix(std::span<const BitVector> rows);
Matrix noisy_feature_matrix(const CollectionRound& round);

// Applies weighted_aggregate `iterations` times with fixed weights, each
// pass consuming the previous output. Zero iterations returns the bits as
// reals.
ReconstructedFeatures reconstruct_features(const LinkPosteriorSet& posteriors,
                                           const Matrix& noisy_features, int iterations);

// Unweighted mean over {self} U neighbors, repeated k times.
Matrix kprop_aggregate(const SyntheticTopology& topology, const Matrix& features, int k);

}  // namespace hogs

#endif  // HOGS_FEATURES_H_
