// Copyright 2026 The levinv Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>

#include "levinv/types.hpp"

namespace levinv {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// A stream is identified by a 64-bit key; the k-th draw of a stream is
/// mix(key + (k + 1) * golden_gamma) and depends only on (key, k). Child
/// streams are derived with split(tag), which hashes the parent key with
/// the tag, so the order in which streams are consumed never changes any
/// value. Only integer arithmetic is involved up to the final conversion,
/// which keeps sequences identical across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng from_seed(std::uint64_t seed);

  CounterRng split(std::uint64_t tag) const;

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t bits(std::uint64_t counter) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

  /// Standard normal by Box-Muller; consumes counters 2k and 2k+1.
  double normal(std::uint64_t k) const;

  Vector normal_vector(Index size) const;
  Matrix normal_matrix(Index rows, Index cols) const;  // row-major counter layout

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t z);

}  // namespace levinv
