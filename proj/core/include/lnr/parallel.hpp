#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace lnr {

  // Number of workers to use for a requested parallel degree; 0 means "all
  // hardware threads".
  inline unsigned worker_count(unsigned requested) {
    if (requested != 0) {
      return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  // Splits [0, n) into `workers` contiguous blocks and runs
  // fn(worker, begin, end) for each block. Blocks are handed out in order, so
  // a worker's block index equals its worker id.
  template <typename Fn>
  void parallel_blocks(std::uint64_t n, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n)));
    if (workers == 1) {
      fn(0u, std::uint64_t{0}, n);
      return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::uint64_t const chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t begin = std::min(n, w * chunk);
      std::uint64_t end   = std::min(n, begin + chunk);
      threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    }
    for (auto& t : threads) {
      t.join();
    }
  }

  // SplitMix64 step, used to derive independent per-chunk seeds so that
  // sampled sweeps give the same samples at every parallel degree.
  constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(chunk + 1)));
  }

  // Samples are generated in fixed-size chunks, each with its own seed.
  inline constexpr std::uint64_t kSampleChunk = 1 << 16;

  // Keeps the witness with the smallest sweep position.
  template <typename Witness>
  struct FirstWitness {
    std::uint64_t           position = UINT64_MAX;
    std::optional<Witness>  witness;

    void offer(std::uint64_t pos, Witness const& w) {
      if (pos < position) {
        position = pos;
        witness  = w;
      }
    }
    void merge(FirstWitness const& other) {
      if (other.witness) {
        offer(other.position, *other.witness);
      }
    }
  };

}  // namespace lnr
