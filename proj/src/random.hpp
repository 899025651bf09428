#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace freeknot::detail {

// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so the helpers below draw directly from its raw output to keep results
// identical across standard libraries.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) {
    x = rng();
  }
  return x % bound;
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace freeknot::detail
