// Copyright 2026 The qmeas Authors
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

#include "qmeas/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace qmeas {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_tasks(std::size_t task_count, int threads,
                    const std::function<void(std::size_t)>& fn) {
  const int workers = std::min<std::size_t>(resolve_thread_count(threads), task_count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < task_count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < task_count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

double deterministic_sum(std::size_t item_count, std::size_t chunk_size, int threads,
                         const std::function<double(std::size_t, std::size_t)>& chunk_sum) {
  if (item_count == 0) return 0.0;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunk_count = (item_count + chunk_size - 1) / chunk_size;
  std::vector<double> partials(chunk_count, 0.0);
  parallel_tasks(chunk_count, threads, [&](std::size_t chunk) {
    const std::size_t begin = chunk * chunk_size;
    const std::size_t end = std::min(begin + chunk_size, item_count);
    partials[chunk] = chunk_sum(begin, end);
  });
  double sum = 0.0;
  double carry = 0.0;
  for (double partial : partials) {
    const double y = partial - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace qmeas
