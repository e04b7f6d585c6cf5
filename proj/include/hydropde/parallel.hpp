#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hydropde {

/// Worker count: PE_THREADS if set (>= 1), else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("PE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is
/// handled by exactly one worker, so disjoint writes stay deterministic.
template <class Fn>
void parallel_for(int n, Fn&& fn, int min_chunk = 1) {
  const int workers = std::min(thread_count(), std::max(1, n / std::max(1, min_chunk)));
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
}

}  // namespace hydropde
