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

#ifndef HOGS_COLLECTION_H_
#define HOGS_COLLECTION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "hogs/bit_vector.h"
#include "hogs/graph_data.h"
#include "hogs/ldp.h"

namespace hogs {

// Public metadata every client and the curator agree on before a round.
struct RoundShape {
  std::size_t node_count = 0;
  std::size_t feature_dim = 0;
  FeatureRange feature_range;
};

// One client's secret data. Views into storage owned elsewhere.
struct PrivateNodeState {
  NodeId node_id = 0;
  const BitVector* adjacency = nullptr;
  std::span<const double> features;
};

struct NoisyReport {
  NodeId node_id = 0;
  BitVector noisy_adjacency;
  BitVector noisy_features;
  BudgetSplit budget;
};

struct CollectionRound {
  RoundShape shape;
  BudgetSplit budget;
  std::uint64_t master_seed = 0;
  // reports[i].node_id == i.
  std::vector<NoisyReport> reports;

  double flip_prob() const { return RrParams::from_epsilon(budget.epsilon_adj).flip_prob; }

  // Throws ProtocolError unless there is exactly one well-formed report per
  // node with the agreed dimensions and budget.
  void validate() const;
};

// Client-side mechanism. Every adjacency bit (diagonal included) goes
// through randomized response at epsilon_adj; every feature value through
// the 1-bit mechanism at epsilon_feat. Noise streams are keyed by
// (master_seed, node_id), so the result is independent of any other client.
NoisyReport perturb_node(const PrivateNodeState& state, const BudgetSplit& budget,
                         const RoundShape& shape, std::uint64_t master_seed);

struct CollectionOptions {
  unsigned threads = 1;
};

CollectionRound run_collection(const GraphDataset& ds, const BudgetSplit& budget,
                               std::uint64_t master_seed, const CollectionOptions& options = {});

// Binary report stream: header {"HOGS", u16 version, f64 epsilon, f64 delta,
// u64 master_seed} then one record per client, each prefixed by its u32 byte
// length: {u32 node_id, u32 n, u32 d, packed adjacency, packed features}.
// Little-endian throughout. The feature range is public metadata and is not
// carried on the wire.
inline constexpr std::uint16_t kReportStreamVersion = 1;

void write_report_stream(std::ostream& out, const CollectionRound& round);
void write_report_stream(const std::filesystem::path& path, const CollectionRound& round);

// Reads a stream back. Dimensions are taken from the records and must agree
// with each other; the caller supplies the public feature range.
CollectionRound read_report_stream(std::istream& in, FeatureRange range = {});
CollectionRound read_report_stream(const std::filesystem::path& path, FeatureRange range = {});

}  // namespace hogs

#endif  // HOGS_COLLECTION_H_
