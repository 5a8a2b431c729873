#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace hgr {

namespace detail {

inline std::size_t& worker_override() {
  static std::size_t value = 0;  // 0 = automatic
  return value;
}

inline std::size_t env_worker_count() {
  if (const char* env = std::getenv("HGR_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace detail

/// Number of workers used for batched fiber/node loops. Defaults to the
/// hardware thread count, capped by the HGR_THREADS environment variable.
inline std::size_t worker_count() {
  if (std::size_t n = detail::worker_override(); n > 0) return n;
  static const std::size_t env = detail::env_worker_count();
  return env;
}

/// Override the automatic worker count (0 restores automatic selection).
inline void set_worker_count(std::size_t n) { detail::worker_override() = n; }

namespace detail {

// Runs fn(begin, end) over disjoint chunks of [0, count). Every index is
// processed exactly once and writes in fn must target distinct locations,
// which keeps results bit-identical to a single sequential pass.
template <class Fn>
void parallel_for(std::size_t count, std::size_t grain, Fn&& fn) {
  grain = std::max<std::size_t>(grain, 1);
  std::size_t workers = std::min(worker_count(), (count + grain - 1) / grain);
  if (workers <= 1) {
    if (count > 0) fn(std::size_t{0}, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail
}  // namespace hgr
