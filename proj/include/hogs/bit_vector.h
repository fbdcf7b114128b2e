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

#ifndef HOGS_BIT_VECTOR_H_
#define HOGS_BIT_VECTOR_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hogs {

// Fixed-length packed bit vector. Bit k lives in word k/64 at position k%64;
// padding bits past size() are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  static constexpr std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

  std::size_t size() const { return size_; }

  bool get(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1U; }
  bool operator[](std::size_t k) const { return get(k); }

  void set(std::size_t k, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (k & 63);
    if (value) {
      words_[k >> 6] |= mask;
    } else {
      words_[k >> 6] &= ~mask;
    }
  }

  // Number of set bits.
  std::size_t count() const;

  // Number of positions set in both vectors. Sizes must match.
  std::size_t and_count(const BitVector& other) const;

  std::span<const std::uint64_t> words() const { return words_; }

  // Little-endian byte packing, bit k at byte k/8, position k%8.
  std::vector<std::uint8_t> to_bytes() const;
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t size);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t popcount_and(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += std::popcount(a[w] & b[w]);
  return total;
}

}  // namespace hogs

#endif  // HOGS_BIT_VECTOR_H_
