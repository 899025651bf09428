#include "freeknot/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "freeknot/errors.hpp"

namespace freeknot {
namespace {

constexpr double kRelativeSlack = 1e-12;

double factorial(int p) {
  double f = 1.0;
  for (int k = 2; k <= p; ++k) {
    f *= k;
  }
  return f;
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be a finite positive number, got " + std::to_string(epsilon));
  }
}

void require_envelope(const DerivativeEnvelope& envelope, int degree) {
  if (degree < 0) {
    throw ConfigError("degree must be non-negative");
  }
  if (envelope.grid.size() < 2 || envelope.values.size() != envelope.grid.size()) {
    throw DataError("envelope needs at least two grid points and one value per point");
  }
  if (envelope.derivative_order != degree + 1) {
    throw ConfigError("envelope holds derivatives of order " +
                      std::to_string(envelope.derivative_order) + " but degree " +
                      std::to_string(degree) + " needs order " + std::to_string(degree + 1));
  }
}

std::vector<double> moving_average(std::span<const double> x, int window) {
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto size = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
  for (std::ptrdiff_t j = 0; j < size; ++j) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, j - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(size - 1, j + half);
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) {
      sum += x[k];
    }
    out[j] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace

SampledFunction finite_difference(const SampledFunction& series, int order) {
  if (order < 1) {
    throw ConfigError("difference order must be at least 1");
  }
  const std::size_t size = series.size();
  const auto k_order = static_cast<std::size_t>(order);
  if (size <= k_order) {
    throw InsufficientDataError("order-" + std::to_string(order) + " differences need at least " +
                                std::to_string(order + 1) + " samples, got " +
                                std::to_string(size));
  }
  const auto t = series.grid();
  std::vector<double> d(series.values().begin(), series.values().end());
  for (std::size_t k = 1; k <= k_order; ++k) {
    for (std::size_t j = 0; j + k < size; ++j) {
      d[j] = static_cast<double>(k) * (d[j + 1] - d[j]) / (t[j + k] - t[j]);
    }
  }
  const double tail = d[size - k_order - 1];
  std::fill(d.begin() + static_cast<std::ptrdiff_t>(size - k_order), d.end(), tail);
  return SampledFunction(std::vector<double>(t.begin(), t.end()), std::move(d));
}

DerivativeEnvelope derivative_envelope(const FunctionSet& set, int degree, int smoothing_window) {
  if (degree < 0) {
    throw ConfigError("degree must be non-negative");
  }
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    throw ConfigError("smoothing window must be a positive odd width");
  }
  const int order = degree + 1;
  if (set.sample_count() < static_cast<std::size_t>(degree) + 2) {
    throw InsufficientDataError("degree " + std::to_string(degree) + " needs at least " +
                                std::to_string(degree + 2) + " grid points");
  }
  DerivativeEnvelope envelope{std::vector<double>(set.grid().begin(), set.grid().end()),
                              std::vector<double>(set.sample_count(), 0.0), order};
  for (std::size_t i = 0; i < set.function_count(); ++i) {
    const SampledFunction derivative = finite_difference(set.function(i), order);
    std::vector<double> d(derivative.values().begin(), derivative.values().end());
    if (smoothing_window > 1) {
      d = moving_average(d, smoothing_window);
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
      envelope.values[j] = std::max(envelope.values[j], std::abs(d[j]));
    }
  }
  return envelope;
}

double local_error_bound(double span_length, double max_envelope, int degree) {
  return max_envelope * std::pow(span_length, degree + 1) / factorial(degree);
}

bool within_tolerance(double delta, double epsilon) {
  return delta <= epsilon * (1.0 + kRelativeSlack);
}

ToleranceConfig::ToleranceConfig(double input, double output)
    : epsilon_input(input), epsilon_output(output) {
  require_epsilon(epsilon_input);
  require_epsilon(epsilon_output);
}

Placement ilp_place_knots(const DerivativeEnvelope& envelope, int degree, double epsilon) {
  require_epsilon(epsilon);
  require_envelope(envelope, degree);
  const auto& t = envelope.grid;
  const auto& c = envelope.values;
  const std::size_t last = t.size() - 1;

  std::vector<double> interior;
  std::vector<std::size_t> forced;
  std::size_t start = 0;
  std::size_t span_index = 0;
  while (start < last) {
    double running_max = c[start];
    std::size_t reach = start;
    for (std::size_t q = start + 1; q <= last; ++q) {
      running_max = std::max(running_max, c[q]);
      if (!within_tolerance(local_error_bound(t[q] - t[start], running_max, degree), epsilon)) {
        break;
      }
      reach = q;
    }
    if (reach == start) {
      reach = start + 1;
      forced.push_back(span_index);
    }
    if (reach == last) {
      break;
    }
    interior.push_back(t[reach]);
    start = reach;
    ++span_index;
  }
  return Placement{KnotSequence(degree, t.front(), t.back(), std::move(interior)), std::move(forced)};
}

KnotSequence equidistant_knots(double lower, double upper, int degree, std::size_t interior_count) {
  if (!(lower < upper)) {
    throw ConfigError("equidistant knots need lower < upper");
  }
  std::vector<double> interior;
  interior.reserve(interior_count);
  const double width = upper - lower;
  const auto segments = static_cast<double>(interior_count + 1);
  for (std::size_t j = 1; j <= interior_count; ++j) {
    interior.push_back(lower + width * static_cast<double>(j) / segments);
  }
  return KnotSequence(degree, lower, upper, std::move(interior));
}

double single_step_floor(const DerivativeEnvelope& envelope, int degree) {
  require_envelope(envelope, degree);
  double floor = 0.0;
  for (std::size_t j = 0; j + 1 < envelope.grid.size(); ++j) {
    const double m = std::max(envelope.values[j], envelope.values[j + 1]);
    floor = std::max(floor, local_error_bound(envelope.grid[j + 1] - envelope.grid[j], m, degree));
  }
  return floor;
}

TargetedPlacement ilp_for_knot_count(const DerivativeEnvelope& envelope, int degree,
                                     std::size_t target) {
  require_envelope(envelope, degree);
  const double peak = *std::max_element(envelope.values.begin(), envelope.values.end());
  const double whole =
      local_error_bound(envelope.grid.back() - envelope.grid.front(), peak, degree);
  if (!(whole > 0.0)) {
    return {ilp_place_knots(envelope, degree, 1.0), 1.0};
  }
  // hi yields no interior knots; lo puts a knot on every interior grid point.
  double hi = 2.0 * whole;
  double lo = 0.5 * single_step_floor(envelope, degree);
  if (!(lo > 0.0)) {
    lo = hi * 1e-300;
  }

  auto distance = [target](const Placement& p) {
    const std::size_t count = p.knots.interior().size();
    return count > target ? count - target : target - count;
  };
  TargetedPlacement best{ilp_place_knots(envelope, degree, hi), hi};
  for (int iter = 0; iter < 200 && distance(best.placement) != 0; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) {
      break;
    }
    Placement trial = ilp_place_knots(envelope, degree, mid);
    const std::size_t count = trial.knots.interior().size();
    if (distance(trial) < distance(best.placement)) {
      best = {std::move(trial), mid};
    }
    (count > target ? lo : hi) = mid;
  }
  return best;
}

bool BoundReport::satisfied() const noexcept {
  return std::all_of(spans.begin(), spans.end(), [](const SpanBound& s) { return s.within; });
}

BoundReport verify_bound(const KnotSequence& knots, const DerivativeEnvelope& envelope,
                         double epsilon) {
  require_epsilon(epsilon);
  require_envelope(envelope, knots.degree());
  const auto& t = envelope.grid;
  const auto& u = knots.expanded();
  BoundReport report{epsilon, {}};
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    if (!(u[k + 1] > u[k])) {
      continue;
    }
    auto lo_it = std::upper_bound(t.begin(), t.end(), u[k]);
    const std::size_t lo = lo_it == t.begin() ? 0 : static_cast<std::size_t>(lo_it - t.begin()) - 1;
    auto hi_it = std::lower_bound(t.begin(), t.end(), u[k + 1]);
    const std::size_t hi =
        hi_it == t.end() ? t.size() - 1 : static_cast<std::size_t>(hi_it - t.begin());
    const double m = *std::max_element(envelope.values.begin() + static_cast<std::ptrdiff_t>(lo),
                                       envelope.values.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const double delta = local_error_bound(u[k + 1] - u[k], m, knots.degree());
    report.spans.push_back({u[k], u[k + 1], m, delta, within_tolerance(delta, epsilon)});
  }
  return report;
}

}  // namespace freeknot
