#pragma once
// Chunked parallel map with deterministic reduction: chunk boundaries depend
// only on n, results are collected per chunk and combined in index order, so
// output is invariant under the thread count.
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace mixsys {

template <class R, class Fn>
std::vector<R> parallel_chunks(std::size_t n, std::size_t chunk_size, int threads, Fn&& fn) {
  if (chunk_size == 0) chunk_size = 1;
  std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<R> results(n_chunks);
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      std::size_t b = c * chunk_size;
      results[c] = fn(b, std::min(n, b + chunk_size));
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      std::size_t b = c * chunk_size;
      results[c] = fn(b, std::min(n, b + chunk_size));
    }
  };
  std::vector<std::thread> pool;
  int nt = std::min<std::size_t>(threads, n_chunks);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace mixsys
