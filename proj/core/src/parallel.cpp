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
#include "levinv/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

namespace levinv {
namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads.store(threads < 1 ? 1 : threads); }

int thread_count() { return g_threads.load(); }

namespace detail {

void run_chunks(Index chunk_count, const std::function<void(Index)>& body) {
  const int workers = static_cast<int>(std::min<Index>(thread_count(), chunk_count));
  if (workers <= 1) {
    for (Index k = 0; k < chunk_count; ++k) body(k);
    return;
  }

  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (Index k = next.fetch_add(1); k < chunk_count; k = next.fetch_add(1)) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail
}  // namespace levinv
