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

#include "hogs/collection.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "hogs/errors.h"
#include "hogs/text_io.h"

namespace hogs {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'O', 'G', 'S'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T take(std::istream& in, const char* what) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ProtocolError(std::string("truncated stream reading ") + what);
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

void check_budget_equal(const BudgetSplit& a, const BudgetSplit& b) {
  if (a.epsilon_total != b.epsilon_total || a.delta != b.delta ||
      a.epsilon_adj != b.epsilon_adj || a.epsilon_feat != b.epsilon_feat) {
    throw ProtocolError("reports in one round must share the same budget");
  }
}

}  // namespace

void CollectionRound::validate() const {
  if (reports.size() != shape.node_count) {
    throw ProtocolError("round has " + std::to_string(reports.size()) + " reports for " +
                        std::to_string(shape.node_count) + " nodes");
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const NoisyReport& r = reports[i];
    if (r.node_id != i) throw ProtocolError("report " + std::to_string(i) + " is out of order");
    if (r.noisy_adjacency.size() != shape.node_count ||
        r.noisy_features.size() != shape.feature_dim) {
      throw ProtocolError("report " + std::to_string(i) + " has wrong dimensions");
    }
    check_budget_equal(r.budget, budget);
  }
}

NoisyReport perturb_node(const PrivateNodeState& state, const BudgetSplit& budget,
                         const RoundShape& shape, std::uint64_t master_seed) {
  if (state.adjacency == nullptr || state.adjacency->size() != shape.node_count ||
      state.features.size() != shape.feature_dim || state.node_id >= shape.node_count) {
    throw ProtocolError("node " + std::to_string(state.node_id) +
                        " does not match the round dimensions");
  }
  NoisyReport report{state.node_id, BitVector(shape.node_count), BitVector(shape.feature_dim),
                     budget};

  const RrParams rr = RrParams::from_epsilon(budget.epsilon_adj);
  KeyedRng adj_rng(master_seed, state.node_id, StreamTag::kAdjacency);
  for (std::size_t j = 0; j < shape.node_count; ++j) {
    report.noisy_adjacency.set(j, rr_perturb_bit(state.adjacency->get(j), rr, adj_rng));
  }

  const OneBitParams one_bit{budget.epsilon_feat, shape.feature_range.lo, shape.feature_range.hi};
  KeyedRng feat_rng(master_seed, state.node_id, StreamTag::kFeatures);
  for (std::size_t k = 0; k < shape.feature_dim; ++k) {
    report.noisy_features.set(k, one_bit_perturb(state.features[k], one_bit, feat_rng));
  }
  return report;
}

CollectionRound run_collection(const GraphDataset& ds, const BudgetSplit& budget,
                               std::uint64_t master_seed, const CollectionOptions& options) {
  CollectionRound round;
  round.shape = {ds.node_count(), ds.feature_dim(), ds.feature_range()};
  round.budget = budget;
  round.master_seed = master_seed;
  round.reports.resize(ds.node_count());

  const std::size_t n = ds.node_count();
  const Matrix& x = ds.features();
  auto client = [&](std::size_t i) {
    const auto id = static_cast<NodeId>(i);
    const BitVector row = adjacency_row(ds, id);
    const PrivateNodeState state{id, &row,
                                 std::span<const double>(x.row(static_cast<Eigen::Index>(i)).data(),
                                                         ds.feature_dim())};
    round.reports[i] = perturb_node(state, budget, round.shape, master_seed);
  };

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) client(i);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) client(i);
      });
    }
  }
  return round;
}

void write_report_stream(std::ostream& out, const CollectionRound& round) {
  round.validate();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kReportStreamVersion);
  put<double>(out, round.budget.epsilon_total);
  put<double>(out, round.budget.delta);
  put<std::uint64_t>(out, round.master_seed);
  for (const NoisyReport& r : round.reports) {
    const auto adj = r.noisy_adjacency.to_bytes();
    const auto feat = r.noisy_features.to_bytes();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(12 + adj.size() + feat.size()));
    put<std::uint32_t>(out, r.node_id);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(r.noisy_adjacency.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(r.noisy_features.size()));
    out.write(reinterpret_cast<const char*>(adj.data()), static_cast<std::streamsize>(adj.size()));
    out.write(reinterpret_cast<const char*>(feat.data()),
              static_cast<std::streamsize>(feat.size()));
  }
  if (!out) throw IoError("failed writing report stream");
}

void write_report_stream(const std::filesystem::path& path, const CollectionRound& round) {
  std::ofstream out = text::open_output(path, /*binary=*/true);
  write_report_stream(out, round);
}

CollectionRound read_report_stream(std::istream& in, FeatureRange range) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ProtocolError("not a report stream (bad magic)");
  }
  const auto version = take<std::uint16_t>(in, "version");
  if (version != kReportStreamVersion) {
    throw ProtocolError("unsupported report stream version " + std::to_string(version));
  }
  const auto epsilon = take<double>(in, "epsilon");
  const auto delta = take<double>(in, "delta");
  CollectionRound round;
  round.master_seed = take<std::uint64_t>(in, "master seed");
  round.budget = split_budget(epsilon, delta);
  round.shape.feature_range = range;

  bool first = true;
  while (in.peek() != std::char_traits<char>::eof()) {
    const auto length = take<std::uint32_t>(in, "record length");
    NoisyReport r;
    r.node_id = take<std::uint32_t>(in, "node id");
    const auto n = take<std::uint32_t>(in, "n");
    const auto d = take<std::uint32_t>(in, "d");
    if (first) {
      round.shape.node_count = n;
      round.shape.feature_dim = d;
      first = false;
    } else if (n != round.shape.node_count || d != round.shape.feature_dim) {
      throw ProtocolError("record for node " + std::to_string(r.node_id) +
                          " disagrees on dimensions");
    }
    const std::size_t adj_bytes = (std::size_t{n} + 7) / 8;
    const std::size_t feat_bytes = (std::size_t{d} + 7) / 8;
    if (length != 12 + adj_bytes + feat_bytes) {
      throw ProtocolError("record length does not match its dimensions");
    }
    std::vector<std::uint8_t> buf(adj_bytes + feat_bytes);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
      throw ProtocolError("truncated record for node " + std::to_string(r.node_id));
    }
    r.noisy_adjacency = BitVector::from_bytes(std::span(buf).first(adj_bytes), n);
    r.noisy_features = BitVector::from_bytes(std::span(buf).subspan(adj_bytes), d);
    r.budget = round.budget;
    round.reports.push_back(std::move(r));
  }
  // Records may arrive in any client order; the round is keyed by node id.
  std::sort(round.reports.begin(), round.reports.end(),
            [](const NoisyReport& a, const NoisyReport& b) { return a.node_id < b.node_id; });
  round.validate();
  return round;
}

CollectionRound read_report_stream(const std::filesystem::path& path, FeatureRange range) {
  std::ifstream in = text::open_input(path);
  return read_report_stream(in, range);
}

}  // namespace hogs
