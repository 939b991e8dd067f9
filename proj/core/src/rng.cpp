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
#include "levinv/rng.hpp"

#include <cmath>
#include <numbers>

namespace levinv {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng CounterRng::from_seed(std::uint64_t seed) { return CounterRng(splitmix64(seed + kGoldenGamma)); }

CounterRng CounterRng::split(std::uint64_t tag) const {
  return CounterRng(splitmix64(key_ ^ splitmix64(tag * kGoldenGamma + 0x632BE59BD9B4E019ULL)));
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(key_ + (counter + 1) * kGoldenGamma);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform(2 * k);
  const double u2 = uniform(2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector CounterRng::normal_vector(Index size) const {
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = normal(static_cast<std::uint64_t>(i));
  return v;
}

Matrix CounterRng::normal_matrix(Index rows, Index cols) const {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(static_cast<std::uint64_t>(i * cols + j));
  }
  return m;
}

}  // namespace levinv
