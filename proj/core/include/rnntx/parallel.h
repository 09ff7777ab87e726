// core/include/rnntx/parallel.h

// Copyright 2026  The rnntx authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef RNNTX_PARALLEL_H_
#define RNNTX_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rnntx {

// Strided parallel map: fn(i) for i in [0, n). Each index writes only its
// own slot, so thread count changes wall time but never results. The first
// exception (by index) is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, int num_threads, Fn&& fn) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(num_threads < 1 ? 1 : num_threads, n);
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t tid = 0; tid < threads; ++tid) {
      pool.emplace_back(worker, tid, threads);
    }
    for (std::thread& th : pool) th.join();
  }
  for (std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rnntx

#endif  // RNNTX_PARALLEL_H_
