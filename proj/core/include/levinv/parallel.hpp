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

#include <algorithm>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "levinv/types.hpp"

namespace levinv {

/// Worker count for per-row reductions. Defaults to 1.
void set_thread_count(int threads);
int thread_count();

/// Rows are grouped into fixed-size chunks whose partial results are summed
/// in chunk order. The chunk layout does not depend on the thread count, so
/// results are bitwise identical for any number of workers.
inline constexpr Index kReductionChunk = 32;

namespace detail {
void run_chunks(Index chunk_count, const std::function<void(Index)>& body);
}  // namespace detail

/// Sum of chunk(begin, end) over consecutive row ranges covering [0, n).
/// T must support copy and operator+=.
template <class T, class ChunkFn>
T chunked_sum(Index n, T zero, ChunkFn&& chunk) {
  const Index chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(static_cast<std::size_t>(chunks), zero);
  detail::run_chunks(chunks, [&](Index k) {
    const Index begin = k * kReductionChunk;
    const Index end = std::min(n, begin + kReductionChunk);
    partial[static_cast<std::size_t>(k)] = chunk(begin, end);
  });
  T total = std::move(zero);
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace levinv
