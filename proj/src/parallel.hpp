#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace amle::detail {

inline int resolve_threads(int n) {
  if (n > 0) return n;
  const unsigned h = std::thread::hardware_concurrency();
  return h > 0 ? static_cast<int>(h) : 1;
}

/// Dynamic chunked parallel loop over [0, n). The body receives [begin, end)
/// ranges; ranges are disjoint, so the body may write to per-index slots
/// without synchronisation. The first exception thrown is rethrown here.
inline void parallel_for(std::uint64_t n, int n_threads, std::uint64_t chunk,
                         const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  const int threads = resolve_threads(n_threads);
  if (threads <= 1 || n <= chunk) {
    body(0, n);
    return;
  }
  std::atomic<std::uint64_t> pos{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i0 = pos.fetch_add(chunk);
      if (i0 >= n || failed.load(std::memory_order_relaxed)) break;
      try {
        body(i0, std::min(i0 + chunk, n));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads) - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace amle::detail
