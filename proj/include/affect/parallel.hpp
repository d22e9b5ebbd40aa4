#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace affect {

// Runs fn(begin, end) over contiguous chunks of [0, n) and returns the
// per-chunk results in chunk order. Chunk boundaries depend only on n,
// never on the degree, so merged results are identical for any degree.
template <typename R>
std::vector<R> run_chunked(std::size_t n, int degree,
                           const std::function<R(std::size_t, std::size_t)>& fn) {
  constexpr std::size_t kChunk = 4096;
  std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  if (n_chunks == 0) return {};

  std::vector<R> results(n_chunks);
  if (degree <= 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      results[c] = fn(c * kChunk, std::min(n, (c + 1) * kChunk));
    return results;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
      results[c] = fn(c * kChunk, std::min(n, (c + 1) * kChunk));
  };
  std::vector<std::thread> pool;
  int threads = std::min<std::size_t>(static_cast<std::size_t>(degree), n_chunks);
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace affect
