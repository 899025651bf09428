#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "freeknot/knots.hpp"

namespace freeknot::testing {

/// Random open knot sequence on [lower, upper]; repeats interior knots up to
/// the allowed multiplicity now and then.
inline KnotSequence random_knots(std::mt19937_64& rng, int degree, std::size_t max_interior,
                                 double lower = 0.0, double upper = 1.0) {
  std::uniform_int_distribution<std::size_t> count_dist(0, max_interior);
  std::uniform_real_distribution<double> pos(lower, upper);
  std::bernoulli_distribution repeat(0.2);
  const std::size_t count = count_dist(rng);
  std::vector<double> interior;
  while (interior.size() < count) {
    const double x = pos(rng);
    if (x <= lower || x >= upper) continue;
    interior.push_back(x);
  }
  std::sort(interior.begin(), interior.end());
  const int max_mult = std::max(degree, 1);
  std::vector<double> with_repeats;
  for (double x : interior) {
    with_repeats.push_back(x);
    int mult = 1;
    while (mult < max_mult && repeat(rng)) {
      with_repeats.push_back(x);
      ++mult;
    }
  }
  return KnotSequence(degree, lower, upper, std::move(with_repeats));
}

}  // namespace freeknot::testing
