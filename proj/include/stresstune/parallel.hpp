#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stresstune {

/// Worker count: `STRESS_TUNE_THREADS` if set and positive, otherwise the
/// hardware concurrency (0 or unset means auto).
inline std::size_t thread_count() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STRESS_TUNE_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
      // unparseable: fall back to auto
    }
  }
  return hw;
}

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs body(i) for i in [0, count). Each index is handled exactly once, so a
/// body that only writes slot i yields output independent of scheduling.
/// The first exception (lowest index among those raised) is rethrown.
/// Nested calls from inside a worker run serially.
template <typename Body>
void parallel_for(std::size_t count, Body&& body, std::size_t threads = 0) {
  if (threads == 0) threads = thread_count();
  threads = std::min(threads, count);
  if (threads <= 1 || detail::in_parallel_region) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  std::size_t err_index = count;
  auto worker = [&] {
    detail::in_parallel_region = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace stresstune
