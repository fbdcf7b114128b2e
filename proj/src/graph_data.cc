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

#include "hogs/graph_data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "hogs/errors.h"
#include "hogs/random.h"
#include "hogs/text_io.h"
#include "json.hpp"

namespace hogs {
namespace {

struct Line {
  std::size_t number;
  std::string text;
};

// Non-empty, non-comment lines with their 1-based numbers.
std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in = text::open_input(path);
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view t = text::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    lines.push_back({number, std::string(t)});
  }
  return lines;
}

template <typename T>
T parse_field(const std::filesystem::path& path, std::size_t line, std::string_view field,
              const char* what) {
  T value{};
  if (!text::parse_number(field, value)) {
    throw ParseError(path.string(), line,
                     std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::vector<std::pair<std::size_t, int>> rows;
  std::size_t max_id = 0;
  std::vector<std::size_t> line_of;
  for (const Line& line : read_lines(path)) {
    auto fields = text::split(line.text, " \t,");
    if (fields.size() != 2) {
      throw ParseError(path.string(), line.number, "expected 'node_id<TAB>class_idx'");
    }
    auto node = parse_field<std::size_t>(path, line.number, fields[0], "node id");
    int label = parse_field<int>(path, line.number, fields[1], "class index");
    if (label < 0) throw ParseError(path.string(), line.number, "negative class index");
    rows.emplace_back(node, label);
    line_of.push_back(line.number);
    max_id = std::max(max_id, node);
  }
  if (rows.empty()) throw ValidationError(path.string() + ": no labels");
  std::vector<int> labels(max_id + 1, -1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto [node, label] = rows[r];
    if (labels[node] != -1) {
      throw ValidationError(path.string() + ":" + std::to_string(line_of[r]) +
                            ": duplicate label for node " + std::to_string(node));
    }
    labels[node] = label;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == -1) {
      throw ValidationError(path.string() + ": node " + std::to_string(i) + " has no label");
    }
  }
  return labels;
}

Matrix read_features(const std::filesystem::path& path, std::size_t node_count,
                     std::optional<std::size_t> forced_dim) {
  const std::vector<Line> lines = read_lines(path);
  if (lines.empty()) {
    if (!forced_dim) throw ValidationError(path.string() + ": no feature rows");
    return Matrix::Zero(static_cast<Eigen::Index>(node_count),
                        static_cast<Eigen::Index>(*forced_dim));
  }
  const bool dense = lines.front().text.find(',') != std::string::npos;
  if (dense) {
    const std::size_t dim = text::split(lines.front().text, ",").size() - 1;
    if (dim == 0) throw ParseError(path.string(), lines.front().number, "no feature columns");
    if (forced_dim && *forced_dim != dim) {
      throw ValidationError(path.string() + ": feature dimension " + std::to_string(dim) +
                            " does not match expected " + std::to_string(*forced_dim));
    }
    Matrix x(static_cast<Eigen::Index>(node_count), static_cast<Eigen::Index>(dim));
    std::vector<bool> seen(node_count, false);
    for (const Line& line : lines) {
      auto fields = text::split(line.text, ",");
      if (fields.size() != dim + 1) {
        throw ParseError(path.string(), line.number,
                         "expected " + std::to_string(dim + 1) + " columns, found " +
                             std::to_string(fields.size()));
      }
      auto node = parse_field<std::size_t>(path, line.number, text::trim(fields[0]), "node id");
      if (node >= node_count) {
        throw ValidationError(path.string() + ":" + std::to_string(line.number) + ": node " +
                              std::to_string(node) + " out of range");
      }
      if (seen[node]) {
        throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                              ": duplicate feature row for node " + std::to_string(node));
      }
      seen[node] = true;
      for (std::size_t k = 0; k < dim; ++k) {
        x(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(k)) =
            parse_field<double>(path, line.number, text::trim(fields[k + 1]), "feature value");
      }
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      if (!seen[i]) {
        throw ValidationError(path.string() + ": node " + std::to_string(i) +
                              " has no feature row");
      }
    }
    return x;
  }

  struct Triplet {
    std::size_t node, index;
    double value;
  };
  std::vector<Triplet> triplets;
  triplets.reserve(lines.size());
  std::size_t dim = forced_dim.value_or(0);
  for (const Line& line : lines) {
    auto fields = text::split(line.text, " \t");
    if (fields.size() != 3) {
      throw ParseError(path.string(), line.number,
                       "expected 'node_id<TAB>feat_idx<TAB>value' or dense CSV");
    }
    Triplet t{parse_field<std::size_t>(path, line.number, fields[0], "node id"),
              parse_field<std::size_t>(path, line.number, fields[1], "feature index"),
              parse_field<double>(path, line.number, fields[2], "feature value")};
    if (t.node >= node_count) {
      throw ValidationError(path.string() + ":" + std::to_string(line.number) + ": node " +
                            std::to_string(t.node) + " out of range");
    }
    if (forced_dim && t.index >= *forced_dim) {
      throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                            ": feature index out of range");
    }
    if (!forced_dim) dim = std::max(dim, t.index + 1);
    triplets.push_back(t);
  }
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(node_count), static_cast<Eigen::Index>(dim));
  for (const Triplet& t : triplets) {
    x(static_cast<Eigen::Index>(t.node), static_cast<Eigen::Index>(t.index)) = t.value;
  }
  return x;
}

}  // namespace

std::vector<Edge> canonical_edges(std::vector<Edge> pairs) {
  for (Edge& e : pairs) e = Edge::make(e.u, e.v);
  std::erase_if(pairs, [](const Edge& e) { return e.u == e.v; });
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

GraphDataset::GraphDataset(std::size_t node_count, std::vector<Edge> edges, Matrix features,
                           std::vector<int> labels, FeatureRange range)
    : node_count_(node_count),
      edges_(std::move(edges)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      range_(range) {
  if (node_count_ == 0) throw ValidationError("graph has no nodes");
  if (node_count_ > std::numeric_limits<NodeId>::max()) {
    throw ValidationError("node count exceeds 32-bit index range");
  }
  if (static_cast<std::size_t>(features_.rows()) != node_count_ || features_.cols() == 0) {
    throw ValidationError("feature matrix must be n x d with d > 0");
  }
  if (labels_.size() != node_count_) throw ValidationError("every node needs exactly one label");
  if (!(range_.lo < range_.hi)) throw ValidationError("feature range requires lo < hi");

  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.u >= e.v) throw ValidationError("edge pairs must satisfy i < j (no self-pairs)");
    if (e.v >= node_count_) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") references a node out of range");
    }
    if (k > 0 && !(edges_[k - 1] < e)) throw ValidationError("edges must be sorted and unique");
  }
  for (Eigen::Index i = 0; i < features_.rows(); ++i) {
    for (Eigen::Index k = 0; k < features_.cols(); ++k) {
      const double v = features_(i, k);
      if (!(v >= range_.lo && v <= range_.hi)) {
        throw ValidationError("feature (" + std::to_string(i) + "," + std::to_string(k) +
                              ") outside the declared range");
      }
    }
  }
  int max_label = -1;
  for (int y : labels_) {
    if (y < 0) throw ValidationError("negative class label");
    max_label = std::max(max_label, y);
  }
  class_count_ = static_cast<std::size_t>(max_label) + 1;

  std::vector<std::size_t> degree(node_count_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(node_count_ + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < node_count_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

std::span<const NodeId> GraphDataset::neighbors(NodeId i) const {
  if (i >= node_count_) throw DomainError("node index out of range");
  return std::span<const NodeId>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

Matrix GraphDataset::one_hot_labels() const {
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(node_count_),
                          static_cast<Eigen::Index>(class_count_));
  for (std::size_t i = 0; i < node_count_; ++i) y(static_cast<Eigen::Index>(i), labels_[i]) = 1.0;
  return y;
}

std::vector<Edge> read_edges(const std::filesystem::path& path) {
  std::vector<Edge> pairs;
  for (const auto& line : read_lines(path)) {
    auto fields = text::split(line.text, " \t,");
    if (fields.size() != 2) throw ParseError(path.string(), line.number, "expected 'i<TAB>j'");
    pairs.push_back({parse_field<NodeId>(path, line.number, fields[0], "node index"),
                     parse_field<NodeId>(path, line.number, fields[1], "node index")});
  }
  return canonical_edges(std::move(pairs));
}

GraphDataset load_dataset(const std::filesystem::path& feature_path,
                          const std::filesystem::path& edge_path,
                          const std::filesystem::path& label_path, const LoadOptions& options) {
  std::vector<int> labels = read_labels(label_path);
  const std::size_t n = labels.size();
  std::vector<Edge> edges = read_edges(edge_path);
  for (const Edge& e : edges) {
    if (e.v >= n) {
      throw ValidationError(edge_path.string() + ": node index " + std::to_string(e.v) +
                            " out of range for " + std::to_string(n) + " nodes");
    }
  }
  Matrix x = read_features(feature_path, n, options.feature_dim);
  FeatureRange range;
  if (options.feature_range) {
    range = *options.feature_range;
  } else {
    range = {x.minCoeff(), x.maxCoeff()};
    if (!(range.lo < range.hi)) range.hi = range.lo + 1.0;
  }
  return GraphDataset(n, std::move(edges), std::move(x), std::move(labels), range);
}

void write_edges(const std::filesystem::path& path, std::span<const Edge> edges) {
  std::ofstream out = text::open_output(path);
  for (const Edge& e : edges) out << e.u << '\t' << e.v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels) {
  std::ofstream out = text::open_output(path);
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << '\t' << labels[i] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_features(const std::filesystem::path& path, const Matrix& features,
                    FeatureFormat format) {
  std::ofstream out = text::open_output(path);
  std::string line;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    line.clear();
    if (format == FeatureFormat::kDenseCsv) {
      line += std::to_string(i);
      for (Eigen::Index k = 0; k < features.cols(); ++k) {
        line += ',';
        line += text::format_double(features(i, k));
      }
      line += '\n';
    } else {
      for (Eigen::Index k = 0; k < features.cols(); ++k) {
        if (features(i, k) == 0.0) continue;
        line += std::to_string(i) + '\t' + std::to_string(k) + '\t' +
                text::format_double(features(i, k)) + '\n';
      }
    }
    out << line;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetFiles DatasetFiles::in(const std::filesystem::path& dir) {
  return {dir / "features.tsv", dir / "edges.tsv", dir / "labels.tsv", dir / "meta.json"};
}

DatasetFiles save_dataset(const GraphDataset& ds, const std::filesystem::path& dir,
                          FeatureFormat format) {
  std::filesystem::create_directories(dir);
  DatasetFiles files = DatasetFiles::in(dir);
  if (format == FeatureFormat::kDenseCsv) files.features = dir / "features.csv";
  write_edges(files.edges, ds.edges());
  write_labels(files.labels, ds.labels());
  write_features(files.features, ds.features(), format);
  nlohmann::json meta = {{"n", ds.node_count()},
                         {"d", ds.feature_dim()},
                         {"c", ds.class_count()},
                         {"edges", ds.edges().size()},
                         {"feature_lo", ds.feature_range().lo},
                         {"feature_hi", ds.feature_range().hi},
                         {"features_file", files.features.filename().string()}};
  std::ofstream out = text::open_output(files.metadata);
  out << meta.dump(2) << '\n';
  return files;
}

GraphDataset load_dataset(const DatasetFiles& files, const LoadOptions& options) {
  LoadOptions resolved = options;
  DatasetFiles paths = files;
  if (std::filesystem::exists(files.metadata)) {
    std::ifstream in = text::open_input(files.metadata);
    nlohmann::json meta = nlohmann::json::parse(in);
    if (!resolved.feature_dim && meta.contains("d")) resolved.feature_dim = meta["d"];
    if (!resolved.feature_range && meta.contains("feature_lo") && meta.contains("feature_hi")) {
      resolved.feature_range = FeatureRange{meta["feature_lo"], meta["feature_hi"]};
    }
    if (meta.contains("features_file")) {
      paths.features = files.metadata.parent_path() / meta["features_file"].get<std::string>();
    }
  }
  return load_dataset(paths.features, paths.edges, paths.labels, resolved);
}

std::vector<NodeId> SplitAssignment::nodes_with(Role role) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == role) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::array<std::size_t, 3> SplitAssignment::counts() const {
  std::array<std::size_t, 3> c{};
  for (Role r : roles) ++c[static_cast<std::size_t>(r)];
  return c;
}

SplitAssignment split_nodes(std::size_t node_count, const SplitRatios& ratios,
                            std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0)) {
    throw ConfigError("split ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  const auto n = static_cast<double>(node_count);
  const auto n_val = static_cast<std::size_t>(std::llround(n * ratios.validation));
  const auto n_test = static_cast<std::size_t>(std::llround(n * ratios.test));
  if (n_val + n_test > node_count) throw ConfigError("split leaves no training nodes");
  const std::size_t n_train = node_count - n_val - n_test;

  std::vector<NodeId> order(node_count);
  std::iota(order.begin(), order.end(), NodeId{0});
  KeyedRng rng(seed, 0, StreamTag::kSplit);
  for (std::size_t k = node_count; k > 1; --k) {
    std::swap(order[k - 1], order[rng.below(k)]);
  }
  SplitAssignment split{std::vector<Role>(node_count, Role::kTrain), seed};
  for (std::size_t k = n_train; k < n_train + n_val; ++k) split.roles[order[k]] = Role::kValidation;
  for (std::size_t k = n_train + n_val; k < node_count; ++k) split.roles[order[k]] = Role::kTest;
  return split;
}

SplitAssignment split_nodes(const GraphDataset& ds, const SplitRatios& ratios,
                            std::uint64_t seed) {
  return split_nodes(ds.node_count(), ratios, seed);
}

BitVector adjacency_row(const GraphDataset& ds, NodeId i) {
  if (i >= ds.node_count()) throw DomainError("adjacency_row: node index out of range");
  BitVector row(ds.node_count());
  for (NodeId j : ds.neighbors(i)) row.set(j, true);
  return row;
}

}  // namespace hogs
