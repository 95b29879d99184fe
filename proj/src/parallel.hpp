#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rydsieve {

// Runs fn(i) for i in [0, count) on `threads` workers pulling from a shared
// counter.  threads <= 1 runs inline.  Results must be written to
// preallocated per-index slots so the outcome is independent of scheduling.
// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(long count, int threads,
                         const std::function<void(long)>& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = int(std::min<long>(threads, count));
  pool.reserve(std::size_t(n));
  for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}
