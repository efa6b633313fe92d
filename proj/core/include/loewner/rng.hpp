#ifndef LOEWNER_RNG_HPP
#define LOEWNER_RNG_HPP

#include <cstdint>

namespace loewner {

// Identifies one reproducible random stream. Parallel ensembles hand worker i
// the pair {seed, i}; the pair fully determines every sample drawn from it,
// independent of scheduling, platform, or standard library.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Counter-based generator: output j is a pure function of (seed, stream, j).
// The core is a splitmix64-style mixer over the 192-bit tuple, which is
// stateless, seekable, and bit-reproducible everywhere. Distribution
// transforms (Box-Muller, inverse CDF) are implemented here rather than via
// <random>, whose distribution algorithms differ between standard libraries.
class CounterRng {
 public:
  explicit CounterRng(RngSeed s) noexcept;
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : CounterRng(RngSeed{seed, stream}) {}

  std::uint64_t next_u64() noexcept;
  // Uniform in [0, 1), 53-bit resolution.
  double next_double() noexcept;
  double next_uniform(double lo, double hi) noexcept;
  // Standard normal via Box-Muller; draws two uniforms per pair and caches
  // the second variate.
  double next_normal() noexcept;
  // Poisson by inversion for small means, split recursively otherwise.
  std::uint64_t next_poisson(double mean);

  // Random access: the k-th raw output of this stream without disturbing the
  // sequential position. normal_at consumes logical indices 2k and 2k+1.
  std::uint64_t u64_at(std::uint64_t index) const noexcept;
  double double_at(std::uint64_t index) const noexcept;
  double normal_at(std::uint64_t index) const noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

  // Derives an independent stream for a labeled substream (for example the
  // forward extension of a path sampled backward from its endpoint).
  CounterRng fork(std::uint64_t tag) const noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace loewner

#endif  // LOEWNER_RNG_HPP
