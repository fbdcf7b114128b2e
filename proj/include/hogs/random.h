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

#ifndef HOGS_RANDOM_H_
#define HOGS_RANDOM_H_

#include <cstdint>
#include <limits>

namespace hogs {

// Independent streams drawn from one master seed.
enum class StreamTag : std::uint64_t {
  kAdjacency = 1,
  kFeatures = 2,
  kSplit = 3,
  kWeightInit = 4,
  kDropout = 5,
  kSynthetic = 6,
};

// Counter-based generator keyed by (master_seed, node_id, tag). The k-th
// output is a SplitMix64 finalizer applied to key + k * golden_gamma, so any
// stream can be reconstructed in isolation without touching any other.
// Satisfies UniformRandomBitGenerator.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t master_seed, std::uint64_t node_id, StreamTag tag);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace hogs

#endif  // HOGS_RANDOM_H_
