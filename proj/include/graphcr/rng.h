#ifndef GRAPHCR_RNG_H_
#define GRAPHCR_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace graphcr {

// SplitMix64 finalizer; the seed-derivation primitive used everywhere a
// child stream is split off a root seed.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of `root`: SplitMix64(root xor index).
constexpr uint64_t DeriveSeed(uint64_t root, uint64_t index) {
  return SplitMix64(root ^ SplitMix64(index));
}

// mt19937_64 with distribution code that does not depend on the standard
// library implementation, so draws are identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  size_t UniformIndex(size_t n) {
    const uint64_t bound = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<size_t>(r % bound);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double UniformUnit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return UniformUnit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphcr

#endif  // GRAPHCR_RNG_H_
