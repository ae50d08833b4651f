#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace mftg {

// Runs fn(block) for block = 0..n_blocks-1 on up to `threads` workers. Callers
// write per-block results into preallocated slots and reduce in block order,
// which keeps every result independent of the scheduling.
template <typename Fn>
void parallel_blocks(int n_blocks, int threads, Fn&& fn) {
  if (threads <= 1 || n_blocks <= 1) {
    for (int b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) fn(b);
  };
  const int n_workers = std::min(threads, n_blocks);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace mftg
