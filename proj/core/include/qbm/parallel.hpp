#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qbm {

// Worker-count resolution: explicit request > QBM_THREADS env > hardware.
// Thread count never changes results anywhere in this library; it only caps
// how many independent work items run at once.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QBM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, n). Each index owns its output slot, so the
// partition into contiguous chunks cannot affect results. The first
// exception thrown by any worker is rethrown on the calling thread after
// all workers have stopped.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, int threads = 0) {
  const int nt = std::min<std::size_t>(resolve_threads(threads), n == 0 ? 1 : n);
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::atomic<bool> abort{false};
  const std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t lo = chunk * static_cast<std::size_t>(t);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body, &err_mutex, &first_error, &abort] {
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          if (abort.load(std::memory_order_relaxed)) return;
          body(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qbm
