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

#include "hogs/ldp.h"

#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "hogs/errors.h"
#include "hogs/random.h"

namespace hogs {
namespace {

constexpr int kTrials = 1000000;

double flip_rate(double epsilon, bool input, std::uint64_t seed) {
  const RrParams params = RrParams::from_epsilon(epsilon);
  KeyedRng rng(seed, 0, StreamTag::kAdjacency);
  int flips = 0;
  for (int t = 0; t < kTrials; ++t) flips += rr_perturb_bit(input, params, rng) != input;
  return static_cast<double>(flips) / kTrials;
}

TEST(KeyedRng, SameKeySameStream) {
  KeyedRng a(42, 7, StreamTag::kAdjacency);
  KeyedRng b(42, 7, StreamTag::kAdjacency);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(KeyedRng, KeysSeparateStreams) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t node = 0; node < 50; ++node) {
    for (auto tag : {StreamTag::kAdjacency, StreamTag::kFeatures}) {
      firsts.insert(KeyedRng(1, node, tag).next_u64());
    }
  }
  EXPECT_EQ(firsts.size(), 100U);
}

TEST(KeyedRng, BelowStaysInRange) {
  KeyedRng rng(3, 0, StreamTag::kSplit);
  std::vector<int> hist(7, 0);
  for (int k = 0; k < 70000; ++k) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(SplitBudget, Arithmetic) {
  BudgetSplit a = split_budget(4.0, 0.5);
  EXPECT_DOUBLE_EQ(a.epsilon_adj, 2.0);
  EXPECT_DOUBLE_EQ(a.epsilon_feat, 2.0);

  BudgetSplit b = split_budget(8.0, 0.3);
  EXPECT_NEAR(b.epsilon_adj, 5.6, 1e-12);
  EXPECT_NEAR(b.epsilon_feat, 2.4, 1e-12);
  EXPECT_EQ(b.epsilon_adj + b.epsilon_feat, 8.0);
}

TEST(SplitBudget, BoundaryIsFlagged) {
  BudgetSplit s = split_budget(4.0, 0.0);
  EXPECT_EQ(s.epsilon_adj, 4.0);
  EXPECT_EQ(s.epsilon_feat, 0.0);
  EXPECT_TRUE(s.has_degenerate_side());
  // No feature budget: the 1-bit output is a fair coin whatever the input.
  const OneBitParams p{s.epsilon_feat, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(p.prob_one(0.0), 0.5);
  EXPECT_DOUBLE_EQ(p.prob_one(1.0), 0.5);
}

TEST(SplitBudget, SumsToTotalAcrossGrid) {
  for (double eps : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
    for (double delta : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      const BudgetSplit s = split_budget(eps, delta);
      EXPECT_LE(std::abs(s.epsilon_adj + s.epsilon_feat - eps),
                std::numeric_limits<double>::epsilon() * eps);
    }
  }
}

TEST(SplitBudget, RejectsBadInput) {
  EXPECT_THROW(split_budget(4.0, -0.1), ConfigError);
  EXPECT_THROW(split_budget(4.0, 1.1), ConfigError);
  EXPECT_THROW(split_budget(0.0, 0.5), ConfigError);
}

TEST(RandomizedResponse, NoNoiseLimit) {
  const RrParams params = RrParams::from_epsilon(std::numeric_limits<double>::infinity());
  EXPECT_EQ(params.flip_prob, 0.0);
  KeyedRng rng(1, 0, StreamTag::kAdjacency);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_TRUE(rr_perturb_bit(true, params, rng));
    EXPECT_FALSE(rr_perturb_bit(false, params, rng));
  }
}

TEST(RandomizedResponse, ZeroBudgetIsUniform) {
  EXPECT_DOUBLE_EQ(RrParams::from_epsilon(0.0).flip_prob, 0.5);
  const double sigma = std::sqrt(0.25 / kTrials);
  EXPECT_NEAR(flip_rate(0.0, false, 5), 0.5, 4 * sigma);
  EXPECT_NEAR(flip_rate(0.0, true, 6), 0.5, 4 * sigma);
}

TEST(RandomizedResponse, LnThreeFlipsAQuarter) {
  const double eps = std::log(3.0);
  EXPECT_NEAR(RrParams::from_epsilon(eps).flip_prob, 0.25, 1e-15);
  // 3 sigma of a Binomial(1e6, 1/4) frequency is 0.0013.
  EXPECT_NEAR(flip_rate(eps, false, 11), 0.25, 0.0013);
}

TEST(RandomizedResponse, Deterministic) {
  EXPECT_EQ(flip_rate(1.0, false, 99), flip_rate(1.0, false, 99));
}

TEST(OneBit, EndpointProbabilities) {
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    const OneBitParams p{eps, -1.0, 3.0};
    EXPECT_NEAR(p.prob_one(3.0), std::exp(eps) / (std::exp(eps) + 1.0), 1e-15);
    EXPECT_NEAR(p.prob_one(-1.0), 1.0 / (std::exp(eps) + 1.0), 1e-15);
    EXPECT_NEAR(p.prob_one(1.0) + p.prob_zero(1.0), 1.0, 1e-15);
  }
}

TEST(OneBit, BinaryInputMatchesRandomizedResponse) {
  for (double eps : {0.5, 1.0, 2.0, 8.0}) {
    const OneBitParams ob{eps, 0.0, 1.0};
    const double p = RrParams::from_epsilon(eps).flip_prob;
    EXPECT_NEAR(ob.prob_one(0.0), p, 1e-15);
    EXPECT_NEAR(ob.prob_one(1.0), 1.0 - p, 1e-15);
  }
}

TEST(OneBit, RejectsOutOfRange) {
  const OneBitParams p{1.0, 0.0, 1.0};
  KeyedRng rng(1, 0, StreamTag::kFeatures);
  EXPECT_THROW(one_bit_perturb(1.5, p, rng), DomainError);
  EXPECT_THROW(one_bit_perturb(-0.1, p, rng), DomainError);
}

TEST(OneBit, EmpiricalRateAtMidpoint) {
  const OneBitParams p{2.0, 0.0, 1.0};
  KeyedRng rng(17, 0, StreamTag::kFeatures);
  int ones = 0;
  for (int t = 0; t < kTrials; ++t) ones += one_bit_perturb(0.5, p, rng);
  EXPECT_NEAR(static_cast<double>(ones) / kTrials, 0.5, 4 * std::sqrt(0.25 / kTrials));
}

TEST(MaxLikelihoodRatio, RandomizedResponseLnThree) {
  EXPECT_NEAR(max_likelihood_ratio(Mechanism::kRandomizedResponse, std::log(3.0)), 3.0, 3e-12);
}

TEST(MaxLikelihoodRatio, OneBitExtremes) {
  EXPECT_NEAR(max_likelihood_ratio(Mechanism::kOneBit, 2.0) / std::exp(2.0), 1.0, 1e-12);
}

TEST(MaxLikelihoodRatio, ApproachesOneForSmallBudget) {
  EXPECT_NEAR(max_likelihood_ratio(Mechanism::kRandomizedResponse, 1e-9), 1.0, 1e-8);
  EXPECT_NEAR(max_likelihood_ratio(Mechanism::kOneBit, 1e-9), 1.0, 1e-8);
}

TEST(MaxLikelihoodRatio, NeverExceedsBound) {
  for (double eps = 0.05; eps < 10.0; eps += 0.37) {
    for (auto m : {Mechanism::kRandomizedResponse, Mechanism::kOneBit}) {
      EXPECT_LE(max_likelihood_ratio(m, eps), std::exp(eps) * (1 + 1e-12));
    }
  }
}

}  // namespace
}  // namespace hogs
