#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fastintra {

// Seeded RNG wrapper. All real-valued draws are derived from raw mt19937
// words so that a given seed reproduces bit-identical streams on every
// platform (std::uniform_real_distribution makes no such guarantee).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(static_cast<std::uint32_t>(seed)) {}

  std::uint32_t next_u32() { return gen_(); }

  // Uniform in [0, 1).
  double next_double() { return next_u32() * (1.0 / 4294967296.0); }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint32_t below(std::uint32_t n) { return next_u32() % n; }

private:
  std::mt19937 gen_;
};

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.below(static_cast<std::uint32_t>(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace fastintra
