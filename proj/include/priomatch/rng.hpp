#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace priomatch::detail {

// mt19937_64 raw output is fully specified by the standard, so everything
// built on it here is reproducible across platforms. std::uniform_int_distribution
// and std::shuffle are not; avoid them for anything seed-addressed.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // bounds in this library are tiny (<= 1e6); modulo bias is irrelevant
  return rng() % bound;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

}  // namespace priomatch::detail
