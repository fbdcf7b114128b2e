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

#ifndef HOGS_TOPOLOGY_H_
#define HOGS_TOPOLOGY_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hogs/bit_vector.h"
#include "hogs/collection.h"
#include "hogs/graph_data.h"
#include "hogs/matrix.h"

namespace hogs {

// Priors are kept strictly inside (0, 1) so adjacency evidence always
// moves the posterior.
inline constexpr double kPriorFloor = 1e-9;
inline constexpr double kPriorCeiling = 1.0 - 1e-9;

inline double clamp_prior(double raw) {
  return raw < kPriorFloor ? kPriorFloor : (raw > kPriorCeiling ? kPriorCeiling : raw);
}

// Clamped cosine similarity. An all-zero vector yields kPriorFloor.
double cosine_prior(const BitVector& xi, const BitVector& xj);
double cosine_prior(std::span<const double> xi, std::span<const double> xj);

// l: probability of the observed bit pair if the link exists.
// l_prime: probability of it if the link is absent.
struct Likelihoods {
  double l = 0.0;
  double l_prime = 0.0;
};

Likelihoods pair_likelihoods(bool bit_ij, bool bit_ji, double flip_prob);

// Bayes' rule: l * prior / (l * prior + l' * (1 - prior)).
// Throws NumericError on a zero denominator.
double link_posterior(double prior, double l, double l_prime);

struct PairPosterior {
  NodeId i = 0;  // i < j
  NodeId j = 0;
  double prior = 0.0;
  double posterior = 0.0;

  friend bool operator==(const PairPosterior&, const PairPosterior&) = default;
};

// Sparse posterior store: pairs with posterior >= storage_floor, sorted by
// (i, j). Absent pairs have posterior below the floor.
struct LinkPosteriorSet {
  std::size_t node_count = 0;
  double tau = 0.5;
  double storage_floor = 0.5;
  std::vector<PairPosterior> pairs;

  std::optional<double> posterior(NodeId a, NodeId b) const;
};

struct SyntheticTopology {
  std::size_t node_count = 0;
  std::vector<Edge> edges;  // canonical, sorted

  friend bool operator==(const SyntheticTopology&, const SyntheticTopology&) = default;
};

struct TopologyOptions {
  // Rows per Gram block.
  std::size_t block_rows = 256;
  unsigned threads = 1;
};

struct TopologyResult {
  SyntheticTopology topology;
  LinkPosteriorSet posteriors;
};

// Curator-side reconstruction from a complete round: priors are clamped
// cosine similarities between noisy feature bits, evidence is the bit pair
// (A~_ij, A~_ji), and a pair becomes an edge iff its posterior >= tau.
// Pairs with posterior >= min(0.5, tau) are kept for feature reconstruction.
TopologyResult reconstruct_topology(const CollectionRound& round, double tau,
                                    const TopologyOptions& options = {});

// Same scan with priors taken from a real-valued feature matrix the curator
// already holds (public-feature setting). Rows of prior_features are nodes.
TopologyResult reconstruct_topology(const CollectionRound& round, const Matrix& prior_features,
                                    double tau, const TopologyOptions& options = {});

// Raw noisy adjacency, symmetrized by OR, diagonal ignored.
SyntheticTopology noisy_topology_or(const CollectionRound& round);

SyntheticTopology topology_of(const GraphDataset& ds);

// Binary form: {"HGPS", u16 version, u32 n, f64 tau, f64 storage_floor,
// u64 count} then count x {u32 i, u32 j, f64 posterior}, little-endian.
// Priors are not stored; they read back as NaN.
void write_posteriors(const std::filesystem::path& path, const LinkPosteriorSet& set);
LinkPosteriorSet read_posteriors(const std::filesystem::path& path);

}  // namespace hogs

#endif  // HOGS_TOPOLOGY_H_
