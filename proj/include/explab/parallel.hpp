#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace explab {

// --threads takes priority, then EXPANDER_LAB_THREADS, then the hardware.
inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EXPANDER_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Static block partition; results must be written by index so the output
// order never depends on scheduling.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::min(std::max(threads, 1), std::max(count, 1));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=]() {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace explab
