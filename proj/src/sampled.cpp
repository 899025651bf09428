#include "freeknot/sampled.hpp"

#include <cmath>
#include <string>

#include "freeknot/errors.hpp"

namespace freeknot {

void require_increasing_grid(std::span<const double> grid) {
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(grid[j])) {
      throw DataError("grid point " + std::to_string(j) + " is not finite");
    }
    if (j > 0 && !(grid[j] > grid[j - 1])) {
      throw DataError("grid is not strictly increasing at index " + std::to_string(j));
    }
  }
}

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw DataError("grid has " + std::to_string(grid_.size()) + " points but " +
                    std::to_string(values_.size()) + " values were given");
  }
  if (grid_.size() < 2) {
    throw InsufficientDataError("a sampled function needs at least two points");
  }
  require_increasing_grid(grid_);
}

FunctionSet::FunctionSet(std::vector<double> grid, Eigen::MatrixXd values,
                         std::vector<std::string> names)
    : grid_(std::move(grid)), values_(std::move(values)), names_(std::move(names)) {
  if (values_.rows() < 1) {
    throw DataError("a function set needs at least one function");
  }
  if (grid_.empty()) {
    throw InsufficientDataError("a function set needs at least one grid point");
  }
  if (static_cast<std::size_t>(values_.cols()) != grid_.size()) {
    throw DataError("value rows have " + std::to_string(values_.cols()) + " samples but the grid has " +
                    std::to_string(grid_.size()));
  }
  require_increasing_grid(grid_);
  if (names_.empty()) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      names_.push_back("f" + std::to_string(i + 1));
    }
  } else if (names_.size() != function_count()) {
    throw DataError("expected one name per function");
  }
}

SampledFunction FunctionSet::function(std::size_t i) const {
  const auto row = values_.row(static_cast<Eigen::Index>(i));
  return SampledFunction(grid_, std::vector<double>(row.begin(), row.end()));
}

FunctionSet FunctionSet::select(std::span<const std::size_t> rows) const {
  Eigen::MatrixXd picked(static_cast<Eigen::Index>(rows.size()), values_.cols());
  std::vector<std::string> picked_names;
  picked_names.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= function_count()) {
      throw DomainError("function index " + std::to_string(rows[k]) + " out of range");
    }
    picked.row(static_cast<Eigen::Index>(k)) = values_.row(static_cast<Eigen::Index>(rows[k]));
    picked_names.push_back(names_[rows[k]]);
  }
  return FunctionSet(grid_, std::move(picked), std::move(picked_names));
}

}  // namespace freeknot
