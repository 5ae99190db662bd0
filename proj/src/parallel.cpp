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

#include "phishstack/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace phishstack {

namespace {
thread_local int parallel_depth = 0;
}  // namespace

std::size_t worker_count() {
  static const std::size_t count = [] {
    if (const char* env = std::getenv("PHISHSTACK_WORKERS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<std::size_t>(hw > 0 ? hw : 1);
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = worker_count();
  if (n == 1 || workers == 1 || parallel_depth > 0) {
    ++parallel_depth;
    try {
      for (std::size_t i = 0; i < n; ++i) fn(i);
    } catch (...) {
      --parallel_depth;
      throw;
    }
    --parallel_depth;
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto body = [&] {
    ++parallel_depth;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        break;
      }
    }
    --parallel_depth;
  };

  std::vector<std::thread> threads;
  const std::size_t spawn = std::min(workers, n) - 1;
  threads.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) threads.emplace_back(body);
  body();
  for (auto& t : threads) t.join();

  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace phishstack
