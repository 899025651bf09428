#include "freeknot/knots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freeknot/errors.hpp"

namespace freeknot {

KnotSequence::KnotSequence(int degree, double lower, double upper, std::vector<double> interior)
    : degree_(degree), lower_(lower), upper_(upper), interior_(std::move(interior)) {
  if (degree_ < 0) {
    throw ConfigError("degree must be non-negative, got " + std::to_string(degree_));
  }
  if (!std::isfinite(lower_) || !std::isfinite(upper_) || !(lower_ < upper_)) {
    throw ConfigError("knot sequence needs finite lower < upper");
  }
  const std::size_t max_multiplicity = std::max(degree_, 1);
  std::size_t run = 0;
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    const double x = interior_[k];
    if (!(x > lower_ && x < upper_)) {
      throw ConfigError("interior knot " + std::to_string(x) + " is not strictly inside (" +
                        std::to_string(lower_) + ", " + std::to_string(upper_) + ")");
    }
    if (k > 0 && x < interior_[k - 1]) {
      throw ConfigError("interior knots must be non-decreasing");
    }
    run = (k > 0 && x == interior_[k - 1]) ? run + 1 : 1;
    if (run > max_multiplicity) {
      throw ConfigError("interior knot " + std::to_string(x) + " exceeds multiplicity " +
                        std::to_string(max_multiplicity));
    }
  }

  expanded_.reserve(interior_.size() + 2 * (degree_ + 1));
  expanded_.insert(expanded_.end(), degree_ + 1, lower_);
  expanded_.insert(expanded_.end(), interior_.begin(), interior_.end());
  expanded_.insert(expanded_.end(), degree_ + 1, upper_);
}

std::size_t KnotSequence::find_span(double t) const {
  if (!contains(t)) {
    throw DomainError("t = " + std::to_string(t) + " outside [" + std::to_string(lower_) + ", " +
                      std::to_string(upper_) + "]");
  }
  const std::size_t n = basis_count();
  if (t == upper_) {
    return n - 1;
  }
  const auto first = expanded_.begin() + degree_;
  const auto last = expanded_.begin() + static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(std::upper_bound(first, last, t) - expanded_.begin()) - 1;
}

}  // namespace freeknot
