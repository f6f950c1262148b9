#ifndef ERGOKIT_RNG_HPP
#define ERGOKIT_RNG_HPP

#include <cstdint>

namespace ergokit {

// SplitMix64 finalizer: full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based splittable generator: draw k of a stream is a pure function
// of (seed, stream, k). No sequential state, so trajectories are bit-exact
// reproducible regardless of scheduling, and streams can be handed to
// parallel workers without coordination.
class CounterRng {
 public:
  static CounterRng keyed(std::uint64_t seed, std::uint64_t stream = 0) {
    return CounterRng(mix64(seed ^ mix64(stream)));
  }

  std::uint64_t bits(std::uint64_t k) const { return mix64(key_ ^ mix64(k)); }

  // Uniform double in [0, 1), 53 mantissa bits.
  double uniform(std::uint64_t k) const {
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
  }

 private:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
};

// Sequential convenience wrapper over the counter core for generator-style
// code (random kernels, test data). Same determinism guarantees.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : core_(CounterRng::keyed(seed, stream)) {}

  std::uint64_t next_bits() { return core_.bits(ctr_++); }
  double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_bits() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  CounterRng core_;
  std::uint64_t ctr_ = 0;
};

}  // namespace ergokit

#endif  // ERGOKIT_RNG_HPP
