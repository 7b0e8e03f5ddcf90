#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mfx {

// Calls fn(i) for every i in [0, count) on up to `workers` threads. Each index
// runs exactly once; results must be written to per-index slots by fn. If any
// call throws, the exception of the lowest failing index is rethrown after all
// threads have joined, so failures are reported the same way for any worker
// count.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) guarded(i);
      });
    }
  }  // jthreads join here

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mfx
