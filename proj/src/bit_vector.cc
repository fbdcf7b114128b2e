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

#include "hogs/bit_vector.h"

#include "hogs/errors.h"

namespace hogs {

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::size_t BitVector::and_count(const BitVector& other) const {
  if (other.size_ != size_) {
    throw DimensionError("bit vector length mismatch: " + std::to_string(size_) + " vs " +
                         std::to_string(other.size_));
  }
  return popcount_and(words_, other.words_);
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    bytes[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
  }
  return bytes;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t size) {
  if (bytes.size() != (size + 7) / 8) {
    throw ProtocolError("packed bit field has " + std::to_string(bytes.size()) +
                        " bytes, expected " + std::to_string((size + 7) / 8));
  }
  BitVector out(size);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    out.words_[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
  }
  // Drop anything set in the padding of the last byte.
  if (size % 64 != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  }
  return out;
}

}  // namespace hogs
