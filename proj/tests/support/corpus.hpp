#pragma once

// Synthetic signals shared by the unit and acceptance suites.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "freeknot/sampled.hpp"

namespace freeknot::testing {

using Signal = std::function<double(double)>;

struct NamedSignal {
  std::string name;
  Signal f;
};

inline std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t j = 0; j < count; ++j) {
    grid[j] = a + (b - a) * static_cast<double>(j) / static_cast<double>(count - 1);
  }
  return grid;
}

inline double chirp(double t, double phase = 0.0) {
  return std::sin(2.0 * std::numbers::pi / (t + 0.15) + phase);
}

inline double plateau_spike(double t) {
  return std::tanh((t - 0.3) / 0.05) + 1.5 * std::exp(-std::pow((t - 0.7) / 0.03, 2));
}

/// Ten signals on [0, 1]: polynomials, chirps, and plateau/spike shapes.
inline std::vector<NamedSignal> mixed_corpus() {
  return {
      {"linear", [](double t) { return 0.5 * t - 0.2; }},
      {"quadratic", [](double t) { return t * t; }},
      {"cubic", [](double t) { return t * t * t - 0.5 * t; }},
      {"quartic", [](double t) { return 4.0 * std::pow(t - 0.5, 4); }},
      {"chirp", [](double t) { return chirp(t); }},
      {"chirp_shifted", [](double t) { return 0.8 * chirp(t, 1.0); }},
      {"plateau", [](double t) { return std::tanh((t - 0.3) / 0.05); }},
      {"spike", [](double t) { return std::exp(-std::pow((t - 0.7) / 0.03, 2)); }},
      {"plateau_spike", plateau_spike},
      {"wave", [](double t) { return std::sin(2.0 * std::numbers::pi * t) * std::cos(3.0 * std::numbers::pi * t); }},
  };
}

/// Chirps with varied amplitude, phase, and trend.
inline std::vector<NamedSignal> chirp_corpus(std::size_t count = 8) {
  std::vector<NamedSignal> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i);
    const double amplitude = 0.6 + 0.05 * k;
    const double phase = 0.4 * k;
    const double trend = 0.1 * (k - 3.5);
    out.push_back({"chirp" + std::to_string(i), [=](double t) {
                     return amplitude * chirp(t, phase) + trend * t;
                   }});
  }
  return out;
}

inline FunctionSet sample(const std::vector<NamedSignal>& signals, const std::vector<double>& grid) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(signals.size()), static_cast<Eigen::Index>(grid.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = signals[i].f(grid[j]);
    }
    names.push_back(signals[i].name);
  }
  return FunctionSet(grid, std::move(values), std::move(names));
}

inline FunctionSet sample(const NamedSignal& signal, const std::vector<double>& grid) {
  return sample(std::vector<NamedSignal>{signal}, grid);
}

}  // namespace freeknot::testing
