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

#ifndef HOGS_LDP_H_
#define HOGS_LDP_H_

#include "hogs/random.h"

namespace hogs {

// Total budget divided between adjacency bits (1 - delta share) and feature
// bits (delta share). epsilon_adj + epsilon_feat == epsilon_total.
struct BudgetSplit {
  double epsilon_total = 0.0;
  double delta = 0.0;
  double epsilon_adj = 0.0;
  double epsilon_feat = 0.0;

  // True when one side received no budget and emits pure noise.
  bool has_degenerate_side() const { return epsilon_adj == 0.0 || epsilon_feat == 0.0; }
};

// Throws ConfigError for epsilon <= 0 or delta outside [0, 1]. Logs a
// warning to stderr when a side is left with zero budget.
BudgetSplit split_budget(double epsilon, double delta);

// Randomized response on one bit.
struct RrParams {
  double flip_prob = 0.5;

  // flip_prob = 1 / (e^epsilon + 1); epsilon = +inf gives 0.
  static RrParams from_epsilon(double epsilon);
};

bool rr_perturb_bit(bool bit, const RrParams& params, KeyedRng& rng);

// Single-bit release of a bounded real x in [lo, hi]. Reports 1 with
// probability 1/(e^eps+1) + (x-lo)/(hi-lo) * (e^eps-1)/(e^eps+1).
struct OneBitParams {
  double epsilon = 0.0;
  double lo = 0.0;
  double hi = 1.0;

  // Throws DomainError when x is outside [lo, hi].
  double prob_one(double x) const;
  double prob_zero(double x) const;
};

bool one_bit_perturb(double x, const OneBitParams& params, KeyedRng& rng);

enum class Mechanism { kRandomizedResponse, kOneBit };

// Worst-case Pr[out | in] / Pr[out | in'] over adjacent single-bit inputs
// and both binary outputs, evaluated from the mechanism's output law.
double max_likelihood_ratio(Mechanism mechanism, double epsilon);

}  // namespace hogs

#endif  // HOGS_LDP_H_
