#pragma once

#include <cmath>
#include <cstdint>

namespace scifit {

// SplitMix64 generator. Standard-library engines are portable but their
// distributions are not, and every bootstrap band and synthetic corpus must be
// reproducible bit-for-bit across platforms, so the sampling code lives here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, bound), Lemire rejection method
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      const __uint128_t m = static_cast<__uint128_t>(x) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // standard normal via Box-Muller
  double next_normal() {
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // independent substream for parallel or per-replicate work
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    Rng mixer(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace scifit
