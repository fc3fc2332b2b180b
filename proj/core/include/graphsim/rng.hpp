// Deterministic randomness for the whole pipeline.
//
// Draw mapping is fixed here rather than delegated to <random> distributions
// (which are implementation-defined), so a corpus regenerates bit-identically
// anywhere given the same seeds. The engine and mapping are named by
// kRngAlgorithm and recorded in every dataset manifest.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphsim {

inline constexpr const char* kRngAlgorithm = "mt19937_64/mask-reject-int/53bit-real";

// SplitMix64 step; used to derive independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Chain a component into a seed. derive_seed(derive_seed(s, a), b) gives a
// stable per-(a,b) stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t component) {
  return splitmix64(seed ^ splitmix64(component + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) by masked rejection; identical sequence on every
  // platform.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // smallest all-ones mask >= bound-1
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = engine_() & mask;
    } while (v >= bound);
    return v;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Fisher-Yates; order of draws fixed by construction.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphsim
