#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace netalign {

// splitmix64: seedable, platform-stable, and fast enough to repartition the
// whole coordinate space every iteration. The standard <random> distributions
// are implementation-defined, so bounded draws are derived here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound), Lemire's multiply-shift with the rare
  // rejection fixup; exactly uniform and division-free on the hot path.
  // bound must be >= 1.
  std::size_t index(std::size_t bound) {
    const std::uint64_t range = bound;
    std::uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        x = next();
        m = static_cast<unsigned __int128>(x) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fisher-Yates, driven by index() so the permutation is platform-stable.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace netalign
