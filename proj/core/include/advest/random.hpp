#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace advest {

// The raw Philox4x32 bijection with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Counter-based Philox4x32-10 stream. A (seed, stream) pair fully determines
// the sequence, so independent streams can be handed to workers and trials
// without any shared state. Distributions are implemented here rather than
// through <random> so draws are bit-identical across standard libraries.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller (cosine branch only).
  double normal();
  // Uniform on {0, ..., n - 1}; unbiased (rejection sampling).
  std::size_t index(std::size_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

// In-place Fisher-Yates permutation driven by `rng`.
template <typename T>
void shuffle(std::vector<T>& items, RandomSource& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = rng.index(i);
    std::swap(items[i - 1], items[j]);
  }
}

// The per-trial stream layout: stream id = trial * (N + 2) + offset, with
// offsets 0..N-1 for workers, N for the server's index draws and N + 1 for
// auxiliary server randomness (bucket permutations).
struct TrialStreams {
  std::vector<RandomSource> workers;
  RandomSource server;
  RandomSource aux;

  static TrialStreams make(std::uint64_t seed, std::size_t trial,
                           std::size_t num_workers);
};

}  // namespace advest
