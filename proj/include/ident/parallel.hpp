#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ident {

// Worker count for partitioned scans. IDENT_ENGINE_THREADS caps it; the
// default is the hardware concurrency clamped to [1, 8].
inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (n > 8) n = 8;
  if (const char* env = std::getenv("IDENT_ENGINE_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

// Runs body(begin, end, worker) over a partition of [0, total). Small ranges
// stay on the calling thread. Results must be merged with order-independent
// (set) semantics; the partition boundaries are not part of the contract.
inline void parallel_ranges(
    std::uint64_t total,
    const std::function<void(std::uint64_t, std::uint64_t, int)>& body) {
  int workers = worker_count();
  if (workers <= 1 || total < 50'000) {
    body(0, total, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::uint64_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::uint64_t begin = chunk * static_cast<std::uint64_t>(w);
    std::uint64_t end = begin + chunk < total ? begin + chunk : total;
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace ident
