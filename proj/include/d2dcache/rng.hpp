#pragma once

// Deterministic random-stream management.
//
// Every stochastic routine in the library draws from an std::mt19937_64
// engine seeded through a splitmix64-style key mixer.  Streams are addressed
// by (root seed, lane, purpose): replication r of a Monte Carlo run owns the
// lanes (r, 0) for the point pattern, (r, 1) for placement marks, and (r, 2)
// for request draws.  Because a stream's seed depends only on its address and
// never on execution order, replications can run on any number of worker
// threads and still produce bitwise-identical results.

#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace d2dcache {

// splitmix64 finalizer: full-avalanche 64-bit mixing step.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Collision-resistant stream key for (root, lane, purpose).
inline std::uint64_t stream_key(std::uint64_t root, std::uint64_t lane,
                                std::uint64_t purpose = 0) {
  std::uint64_t k = mix64(root);
  k = mix64(k ^ (lane + 0xD1B54A32D192ED03ULL));
  k = mix64(k ^ (purpose + 0x8BB84B93962EACC9ULL));
  return k;
}

// Factory handing out independent, addressable engines under one root seed.
class RngFactory {
 public:
  explicit RngFactory(std::uint64_t root) : root_(root) {}

  std::mt19937_64 stream(std::uint64_t lane, std::uint64_t purpose = 0) const {
    return std::mt19937_64(stream_key(root_, lane, purpose));
  }

  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
};

// Runs fn(i) for i in [0, n) over a fixed block partition.  Results must be
// written to caller-owned, index-addressed storage; the partition (and hence
// the output) is identical for every thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = threads == 0 ? hw : threads;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    if (lo >= n) break;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace d2dcache
