#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace freeknot {

/// One function observed on a strictly increasing grid (at least two points).
class SampledFunction {
 public:
  SampledFunction(std::vector<double> grid, std::vector<double> values);

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// N functions sharing one strictly increasing grid; row i of values() holds f_i.
///
/// A single-point grid is accepted so that scalar targets can be carried as
/// degenerate one-sample curves.
class FunctionSet {
 public:
  FunctionSet(std::vector<double> grid, Eigen::MatrixXd values, std::vector<std::string> names = {});

  std::span<const double> grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::size_t function_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t sample_count() const noexcept { return grid_.size(); }

  SampledFunction function(std::size_t i) const;

  /// Subset of rows, in the given order.
  FunctionSet select(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

/// Throws DataError unless `grid` is strictly increasing and finite.
void require_increasing_grid(std::span<const double> grid);

}  // namespace freeknot
