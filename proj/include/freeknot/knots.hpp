#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace freeknot {

/// Open knot sequence on [lower, upper].
///
/// The expanded vector repeats each boundary `degree + 1` times with the
/// interior knots in between, so the spline space has
/// `interior().size() + degree + 1` basis functions. Throughout the library a
/// spline is described by its polynomial degree; its order is `degree + 1`
/// (a constant spline has degree 0, order 1).
///
/// Interior knots may repeat up to `max(degree, 1)` times, which lowers the
/// continuity at that knot but never produces a discontinuous basis.
class KnotSequence {
 public:
  KnotSequence(int degree, double lower, double upper, std::vector<double> interior = {});

  int degree() const noexcept { return degree_; }
  int order() const noexcept { return degree_ + 1; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  std::span<const double> interior() const noexcept { return interior_; }

  /// n = |interior| + degree + 1.
  std::size_t basis_count() const noexcept { return interior_.size() + degree_ + 1; }

  /// Expanded vector of length basis_count() + degree + 1.
  const std::vector<double>& expanded() const noexcept { return expanded_; }

  bool contains(double t) const noexcept { return t >= lower_ && t <= upper_; }

  /// Index `m` (0-based, into expanded()) of the knot span containing `t`:
  /// expanded()[m] <= t < expanded()[m + 1], with the last non-empty span
  /// closed at `upper`. Throws DomainError outside [lower, upper].
  std::size_t find_span(double t) const;

  friend bool operator==(const KnotSequence&, const KnotSequence&) = default;

 private:
  int degree_;
  double lower_;
  double upper_;
  std::vector<double> interior_;
  std::vector<double> expanded_;
};

}  // namespace freeknot
