#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mnt {

/// Chunked parallel loop over [0, n); the body also receives the worker
/// index (for per-thread scratch).  `threads` <= 1 runs inline.
/// Workers write disjoint data; reductions stay with the caller.  The
/// first exception thrown by a worker is rethrown on the calling thread.
inline void parallel_for(int n, int threads,
                         const std::function<void(int, int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i, 0);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, t, &body, &error, &error_mutex] {
      try {
        for (int i = lo; i < hi; ++i) body(i, t);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace mnt
