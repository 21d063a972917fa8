#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace claimcheck {

// Portable seeded randomness. std::mt19937_64 output is fixed by the
// standard; the distributions are not, so index draws are done here:
//
//   uniform_below(bound): draw r from the engine until r >= (2^64 - bound) % bound,
//                         return r % bound
//   shuffle(v):           for i = n-1 down to 1: swap(v[i], v[uniform_below(i + 1)])
//
// Anything that must reproduce across platforms (splits, epoch order,
// synthetic corpora) goes through this class.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace claimcheck
