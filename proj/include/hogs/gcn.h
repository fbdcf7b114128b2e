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

#ifndef HOGS_GCN_H_
#define HOGS_GCN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hogs/graph_data.h"
#include "hogs/matrix.h"
#include "hogs/random.h"
#include "hogs/topology.h"
#include "json.hpp"

namespace hogs {

struct TrainConfig {
  double learning_rate = 1e-2;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  int max_epochs = 300;
  int patience = 30;
  std::uint64_t seed = 0;
  std::size_t hidden_dim = 16;
};

// D^-1/2 (A + I) D^-1/2 with D the degree of A + I, in CSR form.
SparseMatrix normalize_adjacency(const SyntheticTopology& topology, std::size_t node_count);

// Two-layer graph convolution: logits = A * dropout(relu(A X W1)) * W2.
struct GcnModel {
  Matrix w1;  // d x h
  Matrix w2;  // h x c
  double dropout_rate = 0.5;
  SparseMatrix adjacency;

  std::size_t hidden_dim() const { return static_cast<std::size_t>(w1.cols()); }

  // Glorot-uniform weights drawn from the weight-init stream of seed.
  static GcnModel initialize(SparseMatrix adjacency, std::size_t feature_dim,
                             std::size_t hidden_dim, std::size_t class_count, double dropout,
                             std::uint64_t seed);
};

// rng may be null when train_mode is false. Throws NumericError when the
// features contain non-finite values.
Matrix forward(const GcnModel& model, const Matrix& features, bool train_mode, KeyedRng* rng);

Matrix softmax_rows(const Matrix& logits);

struct LossAndGradients {
  double loss = 0.0;
  Matrix grad_w1;
  Matrix grad_w2;
};

// Mean softmax cross-entropy over the given nodes plus
// weight_decay / 2 * (|W1|^2 + |W2|^2), with exact gradients. The optional
// mask (n x h, entries 0 or 1/(1-p)) multiplies the hidden activations.
LossAndGradients loss_and_gradients(const GcnModel& model, const Matrix& features,
                                    std::span<const int> labels, std::span<const NodeId> nodes,
                                    double weight_decay, const Matrix* dropout_mask = nullptr);

struct TrainMetrics {
  std::uint64_t seed = 0;
  int epochs_run = 0;
  int best_epoch = 0;
  double best_val_acc = 0.0;
  double test_acc = 0.0;
  double wall_ms = 0.0;
};

nlohmann::json to_json(const TrainMetrics& metrics);

struct TrainResult {
  GcnModel model;
  TrainMetrics metrics;
};

// Adam with bias correction and decoupled weight decay on the training
// nodes' cross-entropy. Stops after cfg.patience epochs without a better
// validation accuracy and returns the best-validation weights.
TrainResult train(GcnModel model, const Matrix& features, std::span<const int> labels,
                  const SplitAssignment& split, const TrainConfig& cfg);

double accuracy(const Matrix& logits, std::span<const int> labels, std::span<const NodeId> nodes);

double evaluate(const GcnModel& model, const Matrix& features, std::span<const int> labels,
                const SplitAssignment& split, Role role);

}  // namespace hogs

#endif  // HOGS_GCN_H_
