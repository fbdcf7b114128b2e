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

#include "hogs/gcn.h"

#include <chrono>
#include <cmath>
#include <limits>

#include "hogs/errors.h"

namespace hogs {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + " contains non-finite values");
}

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, KeyedRng& rng) {
  Matrix mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) mask(i, k) = rng.bernoulli(rate) ? 0.0 : keep_scale;
  }
  return mask;
}

// Mean cross-entropy over nodes, and optionally (softmax - onehot) / |nodes|
// written into those rows of grad_logits.
double cross_entropy(const Matrix& logits, std::span<const int> labels,
                     std::span<const NodeId> nodes, Matrix* grad_logits) {
  if (nodes.empty()) return 0.0;
  const double inv = 1.0 / static_cast<double>(nodes.size());
  double loss = 0.0;
  for (NodeId i : nodes) {
    const auto row = logits.row(i);
    const double shift = row.maxCoeff();
    const double log_norm = shift + std::log((row.array() - shift).exp().sum());
    loss += log_norm - row(labels[i]);
    if (grad_logits != nullptr) {
      auto g = grad_logits->row(i);
      g = ((row.array() - log_norm).exp() * inv).matrix();
      g(labels[i]) -= inv;
    }
  }
  return loss * inv;
}

struct Adam {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  Matrix m, v;

  explicit Adam(const Matrix& shape)
      : m(Matrix::Zero(shape.rows(), shape.cols())), v(Matrix::Zero(shape.rows(), shape.cols())) {}

  void step(Matrix& w, const Matrix& grad, double lr, double weight_decay, int t) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    // Decoupled decay uses the pre-update weights.
    const Matrix decay = (lr * weight_decay) * w;
    w.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + kEps);
    w -= decay;
  }
};

}  // namespace

SparseMatrix normalize_adjacency(const SyntheticTopology& topology, std::size_t node_count) {
  std::vector<double> degree(node_count, 1.0);
  for (const Edge& e : topology.edges) {
    if (e.u == e.v || e.v >= node_count) throw ValidationError("invalid edge for normalization");
    degree[e.u] += 1.0;
    degree[e.v] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(node_count + 2 * topology.edges.size());
  for (std::size_t i = 0; i < node_count; ++i) {
    const auto k = static_cast<int>(i);
    triplets.emplace_back(k, k, 1.0 / degree[i]);
  }
  for (const Edge& e : topology.edges) {
    const double w = 1.0 / std::sqrt(degree[e.u] * degree[e.v]);
    triplets.emplace_back(static_cast<int>(e.u), static_cast<int>(e.v), w);
    triplets.emplace_back(static_cast<int>(e.v), static_cast<int>(e.u), w);
  }
  const auto n = static_cast<Eigen::Index>(node_count);
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

GcnModel GcnModel::initialize(SparseMatrix adjacency, std::size_t feature_dim,
                              std::size_t hidden_dim, std::size_t class_count, double dropout,
                              std::uint64_t seed) {
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  KeyedRng rng(seed, 0, StreamTag::kWeightInit);
  auto glorot = [&rng](std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(fan_out));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index k = 0; k < w.cols(); ++k) w(i, k) = (2.0 * rng.uniform() - 1.0) * limit;
    }
    return w;
  };
  GcnModel model;
  model.w1 = glorot(feature_dim, hidden_dim);
  model.w2 = glorot(hidden_dim, class_count);
  model.dropout_rate = dropout;
  model.adjacency = std::move(adjacency);
  return model;
}

Matrix forward(const GcnModel& model, const Matrix& features, bool train_mode, KeyedRng* rng) {
  require_finite(features, "features");
  if (features.rows() != model.adjacency.rows() || features.cols() != model.w1.rows()) {
    throw DimensionError("feature matrix does not match the model");
  }
  Matrix hidden = relu((model.adjacency * features) * model.w1);
  if (train_mode && model.dropout_rate > 0.0) {
    if (rng == nullptr) throw ConfigError("training-mode forward needs a random source");
    hidden = hidden.cwiseProduct(
        dropout_mask(hidden.rows(), hidden.cols(), model.dropout_rate, *rng));
  }
  return model.adjacency * (hidden * model.w2);
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const auto e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp();
    out.row(i) = (e / e.sum()).matrix();
  }
  return out;
}

LossAndGradients loss_and_gradients(const GcnModel& model, const Matrix& features,
                                    std::span<const int> labels, std::span<const NodeId> nodes,
                                    double weight_decay, const Matrix* dropout_mask) {
  require_finite(features, "features");
  const Matrix ax = model.adjacency * features;
  const Matrix z1 = ax * model.w1;
  Matrix hidden = relu(z1);
  if (dropout_mask != nullptr) hidden = hidden.cwiseProduct(*dropout_mask);
  const Matrix logits = model.adjacency * (hidden * model.w2);

  LossAndGradients out;
  Matrix grad_logits = Matrix::Zero(logits.rows(), logits.cols());
  out.loss = cross_entropy(logits, labels, nodes, &grad_logits) +
             0.5 * weight_decay * (model.w1.squaredNorm() + model.w2.squaredNorm());

  // The normalized adjacency is symmetric, so it is its own transpose.
  const Matrix grad_pre = model.adjacency * grad_logits;
  out.grad_w2 = hidden.transpose() * grad_pre + weight_decay * model.w2;
  Matrix grad_hidden = grad_pre * model.w2.transpose();
  if (dropout_mask != nullptr) grad_hidden = grad_hidden.cwiseProduct(*dropout_mask);
  const Matrix grad_z1 = grad_hidden.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  out.grad_w1 = ax.transpose() * grad_z1 + weight_decay * model.w1;
  return out;
}

nlohmann::json to_json(const TrainMetrics& metrics) {
  return {{"seed", metrics.seed},
          {"epochs_run", metrics.epochs_run},
          {"best_val_acc", metrics.best_val_acc},
          {"test_acc", metrics.test_acc},
          {"wall_ms", metrics.wall_ms}};
}

double accuracy(const Matrix& logits, std::span<const int> labels, std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t correct = 0;
  for (NodeId i : nodes) {
    Eigen::Index arg = 0;
    logits.row(i).maxCoeff(&arg);
    if (arg == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

double evaluate(const GcnModel& model, const Matrix& features, std::span<const int> labels,
                const SplitAssignment& split, Role role) {
  const Matrix logits = forward(model, features, /*train_mode=*/false, nullptr);
  return accuracy(logits, labels, split.nodes_with(role));
}

TrainResult train(GcnModel model, const Matrix& features, std::span<const int> labels,
                  const SplitAssignment& split, const TrainConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  require_finite(features, "features");
  if (cfg.max_epochs < 1 || cfg.patience < 1) throw ConfigError("epochs and patience must be >= 1");
  if (labels.size() != static_cast<std::size_t>(features.rows()) ||
      split.roles.size() != labels.size()) {
    throw DimensionError("labels, split and features disagree on node count");
  }
  const std::vector<NodeId> train_nodes = split.nodes_with(Role::kTrain);
  const std::vector<NodeId> val_nodes = split.nodes_with(Role::kValidation);
  if (train_nodes.empty() || val_nodes.empty()) {
    throw ConfigError("training needs train and validation nodes");
  }

  // The first propagation does not depend on the weights.
  const Matrix ax = model.adjacency * features;
  Adam adam1(model.w1), adam2(model.w2);

  TrainMetrics metrics;
  metrics.seed = cfg.seed;
  Matrix best_w1 = model.w1, best_w2 = model.w2;
  double best_val = -1.0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;

  // Scores the current weights and updates the checkpoint. Returns true
  // once patience is exhausted.
  auto checkpoint = [&](const Matrix& hidden, int epoch) {
    const Matrix logits = model.adjacency * (hidden * model.w2);
    const double val_acc = accuracy(logits, labels, val_nodes);
    const double val_loss = cross_entropy(logits, labels, val_nodes, nullptr);
    if (val_acc > best_val || (val_acc == best_val && val_loss < best_val_loss)) {
      best_val = val_acc;
      best_val_loss = val_loss;
      best_w1 = model.w1;
      best_w2 = model.w2;
      metrics.best_epoch = epoch;
      since_best = 0;
      return false;
    }
    return ++since_best >= cfg.patience;
  };

  int epoch = 0;
  bool stopped = false;
  for (epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const Matrix z1 = ax * model.w1;
    const Matrix hidden = relu(z1);
    if (checkpoint(hidden, epoch)) {
      stopped = true;
      break;
    }

    Matrix hidden_train = hidden;
    Matrix mask;
    if (model.dropout_rate > 0.0) {
      KeyedRng rng(cfg.seed, static_cast<std::uint64_t>(epoch), StreamTag::kDropout);
      mask = dropout_mask(hidden.rows(), hidden.cols(), model.dropout_rate, rng);
      hidden_train = hidden.cwiseProduct(mask);
    }
    const Matrix logits = model.adjacency * (hidden_train * model.w2);
    Matrix grad_logits = Matrix::Zero(logits.rows(), logits.cols());
    const double loss = cross_entropy(logits, labels, train_nodes, &grad_logits);
    if (!std::isfinite(loss)) throw TrainingError(epoch, "loss is not finite");

    const Matrix grad_pre = model.adjacency * grad_logits;
    const Matrix grad_w2 = hidden_train.transpose() * grad_pre;
    Matrix grad_hidden = grad_pre * model.w2.transpose();
    if (model.dropout_rate > 0.0) grad_hidden = grad_hidden.cwiseProduct(mask);
    const Matrix grad_z1 = grad_hidden.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
    const Matrix grad_w1 = ax.transpose() * grad_z1;

    adam1.step(model.w1, grad_w1, cfg.learning_rate, cfg.weight_decay, epoch + 1);
    adam2.step(model.w2, grad_w2, cfg.learning_rate, cfg.weight_decay, epoch + 1);
    if (!model.w1.allFinite() || !model.w2.allFinite()) {
      throw TrainingError(epoch, "weights diverged");
    }
  }
  if (!stopped) checkpoint(relu(ax * model.w1), epoch);

  metrics.epochs_run = epoch;
  model.w1 = std::move(best_w1);
  model.w2 = std::move(best_w2);
  metrics.best_val_acc = best_val;
  metrics.test_acc = evaluate(model, features, labels, split, Role::kTest);
  metrics.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(model), metrics};
}

}  // namespace hogs
