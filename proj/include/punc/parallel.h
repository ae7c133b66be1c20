// Copyright 2026 The punc Authors
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

#ifndef PUNC_PARALLEL_H_
#define PUNC_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace punc {

// Runs fn(begin, end, shard) over contiguous shards of [0, n). Shard
// boundaries depend only on (n, num_threads). The first exception thrown by
// any shard is rethrown after all threads join.
template <typename Fn>
void ParallelShards(size_t n, size_t num_threads, Fn&& fn) {
  num_threads = std::max<size_t>(1, std::min(num_threads, n));
  if (num_threads <= 1) {
    fn(size_t{0}, n, size_t{0});
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(num_threads);
  const size_t chunk = (n + num_threads - 1) / num_threads;
  for (size_t shard = 0; shard < num_threads; ++shard) {
    const size_t begin = std::min(n, shard * chunk);
    const size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&, begin, end, shard] {
      try {
        fn(begin, end, shard);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

// Element-wise variant: fn(i) for every i in [0, n).
template <typename Fn>
void ParallelFor(size_t n, size_t num_threads, Fn&& fn) {
  ParallelShards(n, num_threads, [&](size_t begin, size_t end, size_t) {
    for (size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace punc

#endif  // PUNC_PARALLEL_H_
