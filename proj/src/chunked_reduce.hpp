// Copyright 2026 The quid Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace quid::detail {

// Evaluates fn(chunk_index, begin, end) -> Accum over fixed-size chunks of
// [0, n_items) and returns the per-chunk results in chunk order. Chunk
// boundaries depend only on chunk_size, never on the worker count, so a
// caller that seeds per-chunk RNG streams gets identical results for any
// n_threads. fn must not throw.
template <typename Accum, typename Fn>
std::vector<Accum> chunked_map(std::int64_t n_items, std::int64_t chunk_size, int n_threads,
                               Fn&& fn) {
  const std::int64_t n_chunks =
      n_items <= 0 ? 0 : (n_items + chunk_size - 1) / chunk_size;
  std::vector<Accum> results(static_cast<std::size_t>(n_chunks));
  if (n_chunks == 0) return results;

  if (n_threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_threads = static_cast<int>(std::clamp(hw, 1u, 8u));
  }
  n_threads = static_cast<int>(std::min<std::int64_t>(n_threads, n_chunks));

  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * chunk_size;
    const std::int64_t end = std::min(n_items, begin + chunk_size);
    results[static_cast<std::size_t>(c)] = fn(c, begin, end);
  };

  if (n_threads == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return results;
  }

  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (std::int64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
        run_chunk(c);
      }
    });
  }
  for (auto& w : workers) w.join();
  return results;
}

}  // namespace quid::detail
