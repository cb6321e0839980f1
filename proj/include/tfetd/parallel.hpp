#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tfetd {

/// Runs body(i) for i in [begin, end) on up to `threads` workers with a
/// static block split. Results must be written to disjoint slots; the first
/// exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, int threads, Body&& body) {
  const std::ptrdiff_t n = end - begin;
  if (n <= 0) return;
  const int workers = static_cast<int>(std::clamp<std::ptrdiff_t>(threads, 1, n));
  if (workers == 1) {
    for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t lo = begin + n * w / workers;
    const std::ptrdiff_t hi = begin + n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::ptrdiff_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tfetd
