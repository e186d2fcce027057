#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace mtrack {

/// Runs fn(begin, end) over contiguous chunks of [0, n), possibly on multiple
/// threads. Chunk boundaries depend only on (n, threads), so any value written
/// per index is independent of scheduling.
template <class Fn>
void parallel_chunks(int n, int threads, Fn&& fn) {
  if (n <= 0) return;
  const int workers = std::clamp(threads, 1, n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int base = n / workers;
  const int extra = n % workers;
  int begin = 0;
  for (int w = 0; w < workers; ++w) {
    const int len = base + (w < extra ? 1 : 0);
    const int end = begin + len;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace mtrack
