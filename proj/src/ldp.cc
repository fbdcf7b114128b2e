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

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>

#include "hogs/errors.h"

namespace hogs {

BudgetSplit split_budget(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ConfigError("privacy budget epsilon must be positive");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  BudgetSplit split;
  split.epsilon_total = epsilon;
  split.delta = delta;
  split.epsilon_feat = delta * epsilon;
  split.epsilon_adj = epsilon - split.epsilon_feat;
  if (split.epsilon_feat == 0.0) {
    std::cerr << "warning: delta = 0 leaves no feature budget; feature bits are uniform noise\n";
  } else if (split.epsilon_adj == 0.0) {
    std::cerr << "warning: delta = 1 leaves no adjacency budget; adjacency bits are uniform "
                 "noise\n";
  }
  return split;
}

RrParams RrParams::from_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("randomized response needs epsilon >= 0");
  // 1 / (e^eps + 1) written as e^-eps / (1 + e^-eps) to stay finite for large eps.
  const double t = std::exp(-epsilon);
  return RrParams{t / (1.0 + t)};
}

bool rr_perturb_bit(bool bit, const RrParams& params, KeyedRng& rng) {
  return rng.bernoulli(params.flip_prob) ? !bit : bit;
}

double OneBitParams::prob_one(double x) const {
  if (!(lo < hi)) throw DomainError("1-bit mechanism needs lo < hi");
  if (!(x >= lo && x <= hi)) throw DomainError("1-bit input outside [lo, hi]");
  const double t = std::exp(-epsilon);
  const double base = t / (1.0 + t);           // 1 / (e^eps + 1)
  const double slope = (1.0 - t) / (1.0 + t);  // (e^eps - 1) / (e^eps + 1)
  return base + (x - lo) / (hi - lo) * slope;
}

double OneBitParams::prob_zero(double x) const {
  if (!(lo < hi)) throw DomainError("1-bit mechanism needs lo < hi");
  if (!(x >= lo && x <= hi)) throw DomainError("1-bit input outside [lo, hi]");
  const double t = std::exp(-epsilon);
  // Mirror of prob_one, so the small probability never comes from a
  // cancellation.
  const double base = t / (1.0 + t);
  const double slope = (1.0 - t) / (1.0 + t);
  return base + (hi - x) / (hi - lo) * slope;
}

bool one_bit_perturb(double x, const OneBitParams& params, KeyedRng& rng) {
  return rng.bernoulli(params.prob_one(x));
}

double max_likelihood_ratio(Mechanism mechanism, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("likelihood ratio needs epsilon > 0");
  double worst = 1.0;
  if (mechanism == Mechanism::kRandomizedResponse) {
    const double p = RrParams::from_epsilon(epsilon).flip_prob;
    const double keep = 1.0 / (1.0 + std::exp(-epsilon));
    // Rows: input bit. Columns: output bit.
    const std::array<std::array<double, 2>, 2> law = {{{keep, p}, {p, keep}}};
    for (int out = 0; out < 2; ++out) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) worst = std::max(worst, law[a][out] / law[b][out]);
      }
    }
    return worst;
  }
  // Any pair of inputs in [lo, hi] is adjacent; the extremes dominate, but
  // scan a grid so the maximum is found rather than assumed.
  const OneBitParams params{epsilon, 0.0, 1.0};
  constexpr int kGrid = 16;
  for (int a = 0; a <= kGrid; ++a) {
    for (int b = 0; b <= kGrid; ++b) {
      const double xa = static_cast<double>(a) / kGrid;
      const double xb = static_cast<double>(b) / kGrid;
      worst = std::max(worst, params.prob_one(xa) / params.prob_one(xb));
      worst = std::max(worst, params.prob_zero(xa) / params.prob_zero(xb));
    }
  }
  return worst;
}

}  // namespace hogs
