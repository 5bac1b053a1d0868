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

//! Deterministic parallel helpers. Work is cut into chunks whose boundaries
//! depend only on the problem size, never on the worker count, so results
//! (including floating-point reductions) are byte-identical for any number
//! of threads.

#pragma once

#include <cstddef>
#include <functional>

namespace qmeas {

/// Maps a requested thread count to an effective one (<= 0 means "ask the
/// hardware", never less than 1).
int resolve_thread_count(int requested);

/// Runs fn(index) for index in [0, task_count) on up to `threads` workers.
/// Tasks are claimed atomically; fn must not depend on execution order.
void parallel_tasks(std::size_t task_count, int threads,
                    const std::function<void(std::size_t)>& fn);

/// Sum over [0, item_count) split into fixed-size chunks. chunk_sum(begin,
/// end) must return a deterministic partial (compensated internally); the
/// partials are combined in chunk order with Kahan compensation, so the total
/// is independent of the thread count.
double deterministic_sum(std::size_t item_count, std::size_t chunk_size, int threads,
                         const std::function<double(std::size_t, std::size_t)>& chunk_sum);

}  // namespace qmeas
