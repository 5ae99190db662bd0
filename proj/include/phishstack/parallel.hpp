/*
 * Copyright 2026 The PhishStack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHISHSTACK_PARALLEL_HPP
#define PHISHSTACK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace phishstack {

/// Number of worker threads. Reads PHISHSTACK_WORKERS once; falls back to
/// hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n). Work items must be independent; results must
/// be written to disjoint slots so the outcome does not depend on scheduling.
/// Nested calls run sequentially on the caller's thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace phishstack

#endif  // PHISHSTACK_PARALLEL_HPP
