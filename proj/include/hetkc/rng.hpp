#pragma once

#include <cstdint>
#include <random>

namespace hetkc {

/// (master_seed, stream_id) identifies one trial's worth of randomness.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Sampler stages inside one trial. Each gets its own sub-stream so adding
/// draws to one stage never perturbs another.
enum class Stage : std::uint32_t {
  Classes = 1,
  Rings = 2,
  Channels = 3,
};

using Engine = std::mt19937_64;

/// Engine for one (seed, stage) sub-stream. std::seed_seq is fully specified
/// by the standard, so the mapping is stable across platforms.
inline Engine make_engine(const RngSeed& seed, Stage stage) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.master_seed),
      static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_id),
      static_cast<std::uint32_t>(seed.stream_id >> 32),
      static_cast<std::uint32_t>(stage),
  };
  return Engine(seq);
}

/// Uniform integer in [0, bound) via Lemire's multiply-shift with rejection.
/// Used instead of std::uniform_int_distribution so draws are identical
/// across standard library implementations.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  std::uint64_t x = eng();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = eng();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Counter-based coins: draw `index` is the SplitMix64 output at that
/// position of a keyed sequence, so any subset of indices can be evaluated
/// in any order with the same results.
class CounterCoins {
 public:
  explicit CounterCoins(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t index) const {
    std::uint64_t z = key_ + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// True with probability p (53-bit resolution).
  bool flip(std::uint64_t index, double p) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53 < p;
  }

 private:
  std::uint64_t key_;
};

}  // namespace hetkc
