#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rlab {

namespace detail {
inline unsigned& thread_count_slot() {
  static unsigned n = 0;
  return n;
}
}  // namespace detail

// Process-wide worker count; 0 means hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_count_slot() = n; }

inline unsigned thread_count() {
  unsigned n = detail::thread_count_slot();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Runs fn(i) for i in [0, n).  Work is split into fixed contiguous chunks,
// and each fn(i) must write only to its own slot, so results are identical
// to the serial sweep regardless of worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = thread_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace rlab
