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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "hogs/errors.h"
#include "hogs/planted_partition.h"

namespace hogs {
namespace {

Matrix dense(const SparseMatrix& m) { return Matrix(m); }

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, KeyedRng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

SyntheticTopology random_topology(std::size_t n, double density, KeyedRng& rng) {
  SyntheticTopology t{n, {}};
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.bernoulli(density)) t.edges.push_back({i, j});
    }
  }
  return t;
}

// Two clusters of 20 nodes with clean class-indicator features.
struct Toy {
  SyntheticTopology topology;
  Matrix features;
  std::vector<int> labels;
};

Toy separable_toy() {
  Toy toy{{40, {}}, Matrix::Zero(40, 4), std::vector<int>(40)};
  KeyedRng rng(3, 0, StreamTag::kSynthetic);
  for (NodeId i = 0; i < 40; ++i) {
    toy.labels[i] = i < 20 ? 0 : 1;
    toy.features(i, toy.labels[i]) = 1.0;
    toy.features(i, 2 + rng.below(2)) = 1.0;
    for (NodeId j = i + 1; j < 40; ++j) {
      if ((i < 20) == (j < 20) && rng.bernoulli(0.2)) toy.topology.edges.push_back({i, j});
    }
  }
  return toy;
}

TEST(NormalizeAdjacency, EmptyGraphIsIdentity) {
  EXPECT_EQ(dense(normalize_adjacency(SyntheticTopology{2, {}}, 2)), Matrix::Identity(2, 2));
}

TEST(NormalizeAdjacency, SingleEdge) {
  const Matrix a = dense(normalize_adjacency(SyntheticTopology{2, {{0, 1}}}, 2));
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 1), 0.5);
}

TEST(NormalizeAdjacency, SymmetricWithPositiveRows) {
  KeyedRng rng(1, 0, StreamTag::kSynthetic);
  const SyntheticTopology t = random_topology(30, 0.15, rng);
  const Matrix a = dense(normalize_adjacency(t, 30));
  EXPECT_EQ(a, a.transpose());
  for (Eigen::Index i = 0; i < 30; ++i) {
    EXPECT_GT(a.row(i).sum(), 0.0);
    EXPECT_TRUE(std::isfinite(a.row(i).sum()));
  }
}

TEST(Forward, ZeroWeightsGiveZeroLogits) {
  GcnModel m = GcnModel::initialize(normalize_adjacency(SyntheticTopology{3, {{0, 1}}}, 3), 4, 5,
                                    2, 0.5, 1);
  m.w1.setZero();
  m.w2.setZero();
  EXPECT_EQ(forward(m, Matrix::Ones(3, 4), false, nullptr), Matrix::Zero(3, 2));
}

TEST(Forward, SingleNodeClosedForm) {
  GcnModel m = GcnModel::initialize(normalize_adjacency(SyntheticTopology{1, {}}, 1), 2, 2, 2, 0.0,
                                    1);
  m.w1 << 1, -1, 2, 0.5;
  m.w2 << 1, 2, 3, -1;
  Matrix x(1, 2);
  x << 0.5, -1.0;
  // x W1 = [0.5 - 2, -0.5 - 0.5] = [-1.5, -1]; relu = 0 -> logits 0.
  EXPECT_EQ(forward(m, x, false, nullptr), Matrix::Zero(1, 2));
  x << 2.0, 1.0;
  // x W1 = [4, -1.5]; relu = [4, 0]; times W2 = [4, 8].
  const Matrix out = forward(m, x, false, nullptr);
  EXPECT_DOUBLE_EQ(out(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 8.0);
}

TEST(Forward, PermutationEquivariant) {
  KeyedRng rng(9, 0, StreamTag::kSynthetic);
  const std::size_t n = 12;
  const SyntheticTopology t = random_topology(n, 0.3, rng);
  const Matrix x = random_matrix(n, 5, rng);
  GcnModel m = GcnModel::initialize(normalize_adjacency(t, n), 5, 8, 3, 0.0, 4);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  SyntheticTopology tp{n, {}};
  for (const Edge& e : t.edges) tp.edges.push_back(Edge::make(perm[e.u], perm[e.v]));
  std::sort(tp.edges.begin(), tp.edges.end());
  Matrix xp(n, 5);
  for (std::size_t i = 0; i < n; ++i) xp.row(perm[i]) = x.row(i);
  GcnModel mp = m;
  mp.adjacency = normalize_adjacency(tp, n);
  const Matrix out = forward(m, x, false, nullptr);
  const Matrix outp = forward(mp, xp, false, nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_LE((outp.row(perm[i]) - out.row(i)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Forward, RejectsNonFiniteFeatures) {
  GcnModel m = GcnModel::initialize(normalize_adjacency(SyntheticTopology{2, {}}, 2), 2, 3, 2, 0.5, 1);
  Matrix x = Matrix::Zero(2, 2);
  x(1, 0) = std::nan("");
  EXPECT_THROW(forward(m, x, false, nullptr), NumericError);
}

TEST(Forward, DropoutOnlyInTraining) {
  KeyedRng rng(2, 0, StreamTag::kSynthetic);
  const SyntheticTopology t = random_topology(10, 0.3, rng);
  const Matrix x = random_matrix(10, 4, rng).cwiseAbs();
  const GcnModel m = GcnModel::initialize(normalize_adjacency(t, 10), 4, 16, 3, 0.5, 7);
  EXPECT_EQ(forward(m, x, false, nullptr), forward(m, x, false, &rng));
  KeyedRng drop(1, 0, StreamTag::kDropout);
  EXPECT_NE(forward(m, x, true, &drop), forward(m, x, false, nullptr));
}

TEST(SoftmaxRows, SumToOne) {
  KeyedRng rng(5, 0, StreamTag::kSynthetic);
  Matrix logits = 50.0 * random_matrix(40, 7, rng);
  logits(0, 0) = 800.0;
  const Matrix p = softmax_rows(logits);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    EXPECT_GE(p.row(i).minCoeff(), 0.0);
  }
}

TEST(LossAndGradients, MatchFiniteDifferences) {
  KeyedRng rng(31, 0, StreamTag::kSynthetic);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const std::size_t d = 1 + rng.below(5);
    const std::size_t h = 1 + rng.below(4);
    const std::size_t c = 2 + rng.below(3);
    const SyntheticTopology t = random_topology(n, 0.4, rng);
    const Matrix x = random_matrix(n, d, rng);
    std::vector<int> labels(n);
    std::vector<NodeId> nodes;
    for (NodeId i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.below(c));
      if (rng.bernoulli(0.7) || nodes.empty()) nodes.push_back(i);
    }
    GcnModel m = GcnModel::initialize(normalize_adjacency(t, n), d, h, c, 0.0, trial);
    const double wd = 0.01;
    const LossAndGradients g = loss_and_gradients(m, x, labels, nodes, wd);
    EXPECT_GE(g.loss, 0.0);
    const double step = 1e-5;
    auto check = [&](Matrix& w, const Matrix& analytic) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index k = 0; k < w.cols(); ++k) {
          const double saved = w(r, k);
          w(r, k) = saved + step;
          const double up = loss_and_gradients(m, x, labels, nodes, wd).loss;
          w(r, k) = saved - step;
          const double down = loss_and_gradients(m, x, labels, nodes, wd).loss;
          w(r, k) = saved;
          const double numeric = (up - down) / (2 * step);
          const double scale = std::max({std::abs(numeric), std::abs(analytic(r, k)), 1e-3});
          ASSERT_LE(std::abs(numeric - analytic(r, k)) / scale, 1e-4)
              << "trial " << trial << " entry " << r << "," << k;
        }
      }
    };
    check(m.w1, g.grad_w1);
    check(m.w2, g.grad_w2);
  }
}

TEST(LossAndGradients, DropoutMaskGradients) {
  KeyedRng rng(8, 0, StreamTag::kSynthetic);
  const SyntheticTopology t = random_topology(6, 0.5, rng);
  const Matrix x = random_matrix(6, 3, rng);
  const std::vector<int> labels = {0, 1, 2, 0, 1, 2};
  const std::vector<NodeId> nodes = {0, 1, 2, 3, 4, 5};
  GcnModel m = GcnModel::initialize(normalize_adjacency(t, 6), 3, 4, 3, 0.5, 2);
  Matrix mask(6, 4);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(0.5) ? 2.0 : 0.0;
  const LossAndGradients g = loss_and_gradients(m, x, labels, nodes, 0.0, &mask);
  const double step = 1e-5;
  for (Eigen::Index k = 0; k < m.w1.size(); ++k) {
    const double saved = m.w1.data()[k];
    m.w1.data()[k] = saved + step;
    const double up = loss_and_gradients(m, x, labels, nodes, 0.0, &mask).loss;
    m.w1.data()[k] = saved - step;
    const double down = loss_and_gradients(m, x, labels, nodes, 0.0, &mask).loss;
    m.w1.data()[k] = saved;
    const double numeric = (up - down) / (2 * step);
    const double scale = std::max({std::abs(numeric), std::abs(g.grad_w1.data()[k]), 1e-3});
    EXPECT_LE(std::abs(numeric - g.grad_w1.data()[k]) / scale, 1e-4);
  }
}

TEST(Train, SeparableToyReachesPerfectAccuracy) {
  const Toy toy = separable_toy();
  const SplitAssignment split = split_nodes(40, SplitRatios{}, 1);
  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.seed = 5;
  const GcnModel init = GcnModel::initialize(normalize_adjacency(toy.topology, 40), 4, 16, 2,
                                             cfg.dropout, cfg.seed);
  const TrainResult result = train(init, toy.features, toy.labels, split, cfg);
  EXPECT_EQ(result.metrics.test_acc, 1.0);
  EXPECT_LE(result.metrics.epochs_run, 200);
  EXPECT_EQ(evaluate(result.model, toy.features, toy.labels, split, Role::kTest), 1.0);
}

TEST(Train, ZeroLearningRateLeavesWeights) {
  const Toy toy = separable_toy();
  const SplitAssignment split = split_nodes(40, SplitRatios{}, 2);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 20;
  const GcnModel init = GcnModel::initialize(normalize_adjacency(toy.topology, 40), 4, 16, 2,
                                             cfg.dropout, 3);
  const TrainResult result = train(init, toy.features, toy.labels, split, cfg);
  EXPECT_EQ(result.model.w1, init.w1);
  EXPECT_EQ(result.model.w2, init.w2);
  EXPECT_EQ(result.metrics.test_acc, evaluate(init, toy.features, toy.labels, split, Role::kTest));
}

TEST(Train, DeterministicForSeed) {
  PlantedPartitionSpec spec;
  spec.node_count = 150;
  spec.edge_count = 400;
  const GraphDataset ds = generate_planted_partition(spec);
  const SplitAssignment split = split_nodes(ds, SplitRatios{}, 4);
  TrainConfig cfg;
  cfg.max_epochs = 60;
  cfg.seed = 12;
  const GcnModel init = GcnModel::initialize(normalize_adjacency(topology_of(ds), 150),
                                             ds.feature_dim(), 16, ds.class_count(), 0.5, 12);
  const TrainResult a = train(init, ds.features(), ds.labels(), split, cfg);
  const TrainResult b = train(init, ds.features(), ds.labels(), split, cfg);
  EXPECT_EQ(a.model.w1, b.model.w1);
  EXPECT_EQ(a.model.w2, b.model.w2);
  EXPECT_EQ(a.metrics.test_acc, b.metrics.test_acc);
  EXPECT_EQ(a.metrics.best_epoch, b.metrics.best_epoch);
}

TEST(Train, LabelPermutationPermutesOutputColumns) {
  PlantedPartitionSpec spec;
  spec.node_count = 120;
  spec.edge_count = 300;
  spec.class_count = 3;
  const GraphDataset ds = generate_planted_partition(spec);
  const SplitAssignment split = split_nodes(ds, SplitRatios{}, 6);
  TrainConfig cfg;
  cfg.max_epochs = 50;
  cfg.seed = 2;
  const std::array<int, 3> perm = {2, 0, 1};
  std::vector<int> relabeled(ds.labels().size());
  for (std::size_t i = 0; i < relabeled.size(); ++i) relabeled[i] = perm[ds.labels()[i]];
  const GcnModel init = GcnModel::initialize(normalize_adjacency(topology_of(ds), 120),
                                             ds.feature_dim(), 16, 3, 0.5, 2);
  GcnModel init_p = init;
  for (int k = 0; k < 3; ++k) init_p.w2.col(perm[k]) = init.w2.col(k);
  const TrainResult a = train(init, ds.features(), ds.labels(), split, cfg);
  const TrainResult b = train(init_p, ds.features(), relabeled, split, cfg);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LE((b.model.w2.col(perm[k]) - a.model.w2.col(k)).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_EQ(a.metrics.test_acc, b.metrics.test_acc);
}

TEST(Train, DivergenceReportsEpoch) {
  const Toy toy = separable_toy();
  Matrix x = toy.features * 1e300;
  const SplitAssignment split = split_nodes(40, SplitRatios{}, 1);
  TrainConfig cfg;
  cfg.learning_rate = 1e300;
  const GcnModel init = GcnModel::initialize(normalize_adjacency(toy.topology, 40), 4, 16, 2, 0.5, 1);
  EXPECT_THROW(train(init, x, toy.labels, split, cfg), TrainingError);
}

TEST(Accuracy, PerfectPredictor) {
  const std::vector<int> labels = {0, 2, 1, 2};
  Matrix logits = Matrix::Zero(4, 3);
  for (int i = 0; i < 4; ++i) logits(i, labels[i]) = 1.0;
  const std::vector<NodeId> nodes = {0, 1, 2, 3};
  EXPECT_EQ(accuracy(logits, labels, nodes), 1.0);
}

TEST(Accuracy, RandomLogitsAreAtChance) {
  KeyedRng rng(17, 0, StreamTag::kSynthetic);
  const int n = 20000, c = 5;
  std::vector<int> labels(n);
  std::vector<NodeId> nodes(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.below(c));
    nodes[i] = i;
  }
  const Matrix logits = random_matrix(n, c, rng);
  EXPECT_NEAR(accuracy(logits, labels, nodes), 1.0 / c, 4 * std::sqrt(0.2 * 0.8 / n));
}

TEST(TrainMetrics, JsonFields) {
  TrainMetrics m{7, 120, 90, 0.8, 0.75, 12.5};
  const nlohmann::json j = to_json(m);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("epochs_run"), 120);
  EXPECT_EQ(j.at("best_val_acc"), 0.8);
  EXPECT_EQ(j.at("test_acc"), 0.75);
  EXPECT_EQ(j.at("wall_ms"), 12.5);
}

}  // namespace
}  // namespace hogs
