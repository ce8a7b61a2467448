#pragma once

#include <cstdint>
#include <vector>

namespace wlopt {

// SplitMix64. A std:: engine would do, but the distributions on top of it
// are implementation-defined, and randomized outputs here must be
// reproducible bit for bit across compilers and machines.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream for replicate `index` of a run seeded with `seed`. The derivation is
// a pure function of the pair, so the stream does not depend on execution
// order or thread layout.
inline Rng replicate_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  s = mix64(s ^ (index + 0x9E3779B97F4A7C15ULL));
  return Rng(s);
}

// Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace wlopt
