#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "freeknot/knots.hpp"
#include "freeknot/sampled.hpp"

namespace freeknot {

/// Order-th forward divided difference, scaled by order! so it estimates the
/// order-th derivative. Uses the actual grid spacings; on a uniform grid this
/// equals iterating (f(t_{j+1}) - f(t_j)) / (t_{j+1} - t_j) `order` times.
/// The trailing `order` points repeat the last computable value.
SampledFunction finite_difference(const SampledFunction& series, int order);

/// Pointwise max over a function set of |(degree+1)-th derivative|.
struct DerivativeEnvelope {
  std::vector<double> grid;
  std::vector<double> values;
  int derivative_order = 1;
};

/// `smoothing_window` (odd, default 1 = off) applies a centered moving
/// average to each function's derivative estimate before taking |.| and max;
/// the window is truncated at the grid ends.
DerivativeEnvelope derivative_envelope(const FunctionSet& set, int degree, int smoothing_window = 1);

/// M * h^(p+1) / p!
double local_error_bound(double span_length, double max_envelope, int degree);

/// delta <= epsilon, up to a relative slack of 1e-12 that absorbs rounding in
/// grid-spacing arithmetic (delta == epsilon passes).
bool within_tolerance(double delta, double epsilon);

/// Input/output accuracy targets of an M2P representation.
struct ToleranceConfig {
  double epsilon_input;
  double epsilon_output;

  ToleranceConfig(double input, double output);
  explicit ToleranceConfig(double both) : ToleranceConfig(both, both) {}
};

struct Placement {
  KnotSequence knots;
  /// 0-based indices of knot spans (counted left to right over distinct
  /// knots) whose single grid step already exceeded epsilon.
  std::vector<std::size_t> forced_spans;
};

/// Iterative Local Placement: greedy left-to-right scan over the grid that
/// ends every span at the farthest grid point keeping
/// local_error_bound(span, max envelope over span, degree) <= epsilon.
Placement ilp_place_knots(const DerivativeEnvelope& envelope, int degree, double epsilon);

/// k interior knots at lower + j (upper - lower) / (k + 1).
KnotSequence equidistant_knots(double lower, double upper, int degree, std::size_t interior_count);

/// Smallest epsilon for which ILP needs no forced spans: the largest
/// single-grid-step bound over the envelope.
double single_step_floor(const DerivativeEnvelope& envelope, int degree);

/// ILP run whose epsilon is searched (log-bisection) so the interior knot
/// count is as close as possible to `target`. The epsilon used is returned.
struct TargetedPlacement {
  Placement placement;
  double epsilon;
};
TargetedPlacement ilp_for_knot_count(const DerivativeEnvelope& envelope, int degree,
                                     std::size_t target);

struct SpanBound {
  double lower;
  double upper;
  double max_envelope;
  double bound;
  bool within;
};

struct BoundReport {
  double epsilon;
  std::vector<SpanBound> spans;

  bool satisfied() const noexcept;
};

/// Local bound of every positive-length span. The envelope maximum on a span
/// is taken over the grid points bracketing it.
BoundReport verify_bound(const KnotSequence& knots, const DerivativeEnvelope& envelope,
                         double epsilon);

}  // namespace freeknot
