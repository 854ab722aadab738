#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace klic {

inline int num_chunks(long n, int workers) {
  return int(std::max(1L, std::min(long(std::max(1, workers)), n)));
}

// Split [0, n) into num_chunks(n, workers) contiguous chunks and invoke
// fn(chunk_index, begin, end) on each, concurrently when workers > 1.
// fn must only touch state owned by its chunk; callers merge afterwards.
template <typename Fn>
void parallel_chunks(long n, int workers, Fn&& fn) {
  const int chunks = num_chunks(n, workers);
  if (chunks <= 1) {
    fn(0, 0L, n);
    return;
  }
  const long step = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (int c = 0; c < chunks; ++c) {
    const long lo = c * step;
    const long hi = std::min(n, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace klic
