#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nlt {

/// Worker cap: NONLOCAL_THREADS env var, else hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("NONLOCAL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Chunked parallel loop over [0, n). The body must write only to
/// index-disjoint outputs; results are then deterministic regardless of the
/// worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int nt = max_threads();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(nt, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace nlt
