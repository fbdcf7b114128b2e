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

#include "hogs/topology.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

#include "hogs/errors.h"
#include "hogs/text_io.h"

namespace hogs {
namespace {

// Evidence classes of an observed bit pair: 0 = (0,0), 1 = mixed, 2 = (1,1).
int evidence_class(bool a, bool b) { return static_cast<int>(a) + static_cast<int>(b); }

struct BlockOutput {
  std::vector<PairPosterior> kept;
  std::vector<Edge> edges;
};

// Fills strip(r, c) with raw similarity of node (row_begin + r) against node
// (row_begin + c) for c > r, i.e. the upper-triangular part of one row-block
// of the Gram matrix, restricted to columns >= row_begin.
class BitGram {
 public:
  explicit BitGram(const CollectionRound& round) : n_(round.shape.node_count) {
    words_per_row_ = BitVector::word_count(round.shape.feature_dim);
    packed_.resize(n_ * words_per_row_);
    counts_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto w = round.reports[i].noisy_features.words();
      std::copy(w.begin(), w.end(), packed_.begin() + static_cast<std::ptrdiff_t>(i * words_per_row_));
      counts_[i] = static_cast<double>(round.reports[i].noisy_features.count());
    }
  }

  void fill(std::size_t row_begin, std::size_t row_end, std::size_t tile, Matrix& strip) const {
    const std::size_t rows = row_end - row_begin;
    strip.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_ - row_begin));
    for (std::size_t col_begin = row_begin; col_begin < n_; col_begin += tile) {
      const std::size_t col_end = std::min(n_, col_begin + tile);
      for (std::size_t i = row_begin; i < row_end; ++i) {
        const std::uint64_t* a = row(i);
        const double ci = counts_[i];
        for (std::size_t j = std::max(i + 1, col_begin); j < col_end; ++j) {
          const std::uint64_t* b = row(j);
          std::size_t dot = 0;
          for (std::size_t w = 0; w < words_per_row_; ++w) dot += std::popcount(a[w] & b[w]);
          const double cj = counts_[j];
          const double cosine =
              (ci == 0.0 || cj == 0.0) ? 0.0 : static_cast<double>(dot) / std::sqrt(ci * cj);
          strip(static_cast<Eigen::Index>(i - row_begin),
                static_cast<Eigen::Index>(j - row_begin)) = cosine;
        }
      }
    }
  }

 private:
  const std::uint64_t* row(std::size_t i) const { return packed_.data() + i * words_per_row_; }

  std::size_t n_;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> packed_;
  std::vector<double> counts_;
};

class DenseGram {
 public:
  explicit DenseGram(const Matrix& features) : normalized_(features) {
    for (Eigen::Index i = 0; i < normalized_.rows(); ++i) {
      const double norm = normalized_.row(i).norm();
      if (norm > 0.0) {
        normalized_.row(i) /= norm;
      } else {
        normalized_.row(i).setZero();
      }
    }
  }

  void fill(std::size_t row_begin, std::size_t row_end, std::size_t /*tile*/,
            Matrix& strip) const {
    const auto rb = static_cast<Eigen::Index>(row_begin);
    const auto rows = static_cast<Eigen::Index>(row_end - row_begin);
    const auto cols = normalized_.rows() - rb;
    strip.noalias() =
        normalized_.middleRows(rb, rows) * normalized_.middleRows(rb, cols).transpose();
  }

 private:
  Matrix normalized_;
};

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("threshold tau must lie in [0, 1]");
}

template <typename Gram>
TopologyResult scan_pairs(const CollectionRound& round, const Gram& gram, double tau,
                          const TopologyOptions& options) {
  const std::size_t n = round.shape.node_count;
  const double p1 = round.flip_prob();
  const double floor = std::min(0.5, tau);
  const std::array<Likelihoods, 3> table = {pair_likelihoods(false, false, p1),
                                            pair_likelihoods(false, true, p1),
                                            pair_likelihoods(true, true, p1)};
  const std::size_t block = std::max<std::size_t>(1, options.block_rows);
  const std::size_t block_count = (n + block - 1) / block;
  std::vector<BlockOutput> outputs(block_count);

  auto run_block = [&](std::size_t b, Matrix& strip) {
    const std::size_t row_begin = b * block;
    const std::size_t row_end = std::min(n, row_begin + block);
    gram.fill(row_begin, row_end, block, strip);
    BlockOutput& out = outputs[b];
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const BitVector& row_i = round.reports[i].noisy_adjacency;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double prior = clamp_prior(strip(static_cast<Eigen::Index>(i - row_begin),
                                               static_cast<Eigen::Index>(j - row_begin)));
        const Likelihoods& lk =
            table[evidence_class(row_i.get(j), round.reports[j].noisy_adjacency.get(i))];
        const double posterior = link_posterior(prior, lk.l, lk.l_prime);
        if (posterior >= floor) {
          out.kept.push_back(
              {static_cast<NodeId>(i), static_cast<NodeId>(j), prior, posterior});
        }
        if (posterior >= tau) out.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  };

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    Matrix strip;
    for (std::size_t b = 0; b < block_count; ++b) run_block(b, strip);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        Matrix strip;
        for (std::size_t b = t; b < block_count; b += threads) run_block(b, strip);
      });
    }
  }

  // Blocks cover increasing row ranges, so concatenation in block order is
  // already sorted by (i, j) regardless of which worker ran which block.
  TopologyResult result;
  result.topology.node_count = n;
  result.posteriors = {n, tau, floor, {}};
  std::size_t kept = 0, edges = 0;
  for (const auto& o : outputs) {
    kept += o.kept.size();
    edges += o.edges.size();
  }
  result.posteriors.pairs.reserve(kept);
  result.topology.edges.reserve(edges);
  for (auto& o : outputs) {
    result.posteriors.pairs.insert(result.posteriors.pairs.end(), o.kept.begin(), o.kept.end());
    result.topology.edges.insert(result.topology.edges.end(), o.edges.begin(), o.edges.end());
  }
  return result;
}

template <typename T>
void put(std::ostream& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ProtocolError("truncated posterior file");
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

constexpr std::array<char, 4> kPosteriorMagic = {'H', 'G', 'P', 'S'};
constexpr std::uint16_t kPosteriorVersion = 1;

}  // namespace

double cosine_prior(const BitVector& xi, const BitVector& xj) {
  const std::size_t dot = xi.and_count(xj);
  const std::size_t ci = xi.count();
  const std::size_t cj = xj.count();
  if (ci == 0 || cj == 0) return kPriorFloor;
  return clamp_prior(static_cast<double>(dot) /
                     std::sqrt(static_cast<double>(ci) * static_cast<double>(cj)));
}

double cosine_prior(std::span<const double> xi, std::span<const double> xj) {
  if (xi.size() != xj.size()) throw DimensionError("cosine_prior: length mismatch");
  double dot = 0.0, ni = 0.0, nj = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    dot += xi[k] * xj[k];
    ni += xi[k] * xi[k];
    nj += xj[k] * xj[k];
  }
  if (ni == 0.0 || nj == 0.0) return kPriorFloor;
  return clamp_prior(dot / (std::sqrt(ni) * std::sqrt(nj)));
}

Likelihoods pair_likelihoods(bool bit_ij, bool bit_ji, double flip_prob) {
  const double p = flip_prob;
  const double q = 1.0 - p;
  switch (evidence_class(bit_ij, bit_ji)) {
    case 0:
      return {p * p, q * q};
    case 1:
      return {p * q, p * q};
    default:
      return {q * q, p * p};
  }
}

double link_posterior(double prior, double l, double l_prime) {
  const double num = l * prior;
  const double den = num + l_prime * (1.0 - prior);
  if (!(den > 0.0)) throw NumericError("link posterior has a zero denominator");
  return num / den;
}

std::optional<double> LinkPosteriorSet::posterior(NodeId a, NodeId b) const {
  const Edge key = Edge::make(a, b);
  auto it = std::lower_bound(pairs.begin(), pairs.end(), key, [](const PairPosterior& p, const Edge& k) {
    return std::pair(p.i, p.j) < std::pair(k.u, k.v);
  });
  if (it == pairs.end() || it->i != key.u || it->j != key.v) return std::nullopt;
  return it->posterior;
}

TopologyResult reconstruct_topology(const CollectionRound& round, double tau,
                                    const TopologyOptions& options) {
  check_tau(tau);
  round.validate();
  return scan_pairs(round, BitGram(round), tau, options);
}

TopologyResult reconstruct_topology(const CollectionRound& round, const Matrix& prior_features,
                                    double tau, const TopologyOptions& options) {
  check_tau(tau);
  round.validate();
  if (static_cast<std::size_t>(prior_features.rows()) != round.shape.node_count) {
    throw ProtocolError("prior features do not cover every node of the round");
  }
  return scan_pairs(round, DenseGram(prior_features), tau, options);
}

SyntheticTopology noisy_topology_or(const CollectionRound& round) {
  round.validate();
  SyntheticTopology t{round.shape.node_count, {}};
  const std::size_t n = round.shape.node_count;
  for (std::size_t i = 0; i < n; ++i) {
    const BitVector& row_i = round.reports[i].noisy_adjacency;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (row_i.get(j) || round.reports[j].noisy_adjacency.get(i)) {
        t.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  return t;
}

SyntheticTopology topology_of(const GraphDataset& ds) { return {ds.node_count(), ds.edges()}; }

void write_posteriors(const std::filesystem::path& path, const LinkPosteriorSet& set) {
  std::ofstream out = text::open_output(path, /*binary=*/true);
  out.write(kPosteriorMagic.data(), kPosteriorMagic.size());
  put<std::uint16_t>(out, kPosteriorVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(set.node_count));
  put<double>(out, set.tau);
  put<double>(out, set.storage_floor);
  put<std::uint64_t>(out, set.pairs.size());
  for (const PairPosterior& p : set.pairs) {
    put<std::uint32_t>(out, p.i);
    put<std::uint32_t>(out, p.j);
    put<double>(out, p.posterior);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

LinkPosteriorSet read_posteriors(const std::filesystem::path& path) {
  std::ifstream in = text::open_input(path);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kPosteriorMagic) {
    throw ProtocolError(path.string() + ": not a posterior file");
  }
  if (take<std::uint16_t>(in) != kPosteriorVersion) {
    throw ProtocolError(path.string() + ": unsupported posterior file version");
  }
  LinkPosteriorSet set;
  set.node_count = take<std::uint32_t>(in);
  set.tau = take<double>(in);
  set.storage_floor = take<double>(in);
  const auto count = take<std::uint64_t>(in);
  set.pairs.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    PairPosterior p;
    p.i = take<std::uint32_t>(in);
    p.j = take<std::uint32_t>(in);
    p.posterior = take<double>(in);
    p.prior = std::numeric_limits<double>::quiet_NaN();
    if (p.i >= p.j || p.j >= set.node_count) throw ProtocolError("posterior pair out of range");
    set.pairs.push_back(p);
  }
  return set;
}

}  // namespace hogs
