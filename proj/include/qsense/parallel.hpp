#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qsense {

/// Thread cap: min(hardware_concurrency, QSENSE_THREADS when set).
inline unsigned thread_limit() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QSENSE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v < static_cast<long>(hw)) return static_cast<unsigned>(v);
  }
  return hw;
}

/// Runs fn(i) for i in [0, count) across worker threads. Results must be
/// written to disjoint slots so the outcome is independent of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(thread_limit(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    threads.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : threads) t.join();
}

}  // namespace qsense
