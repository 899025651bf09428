#include "freeknot/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "freeknot/errors.hpp"

namespace freeknot {
namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DataError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
  if (a == 0) {
    throw DataError("metrics need at least one value");
  }
}

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError("curve sets are sampled differently: " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
  if (a.size() == 0) {
    throw DataError("metrics need at least one curve sample");
  }
}

}  // namespace

double max_abs_error(std::span<const double> actual, std::span<const double> predicted) {
  require_same_length(actual.size(), predicted.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < actual.size(); ++j) {
    worst = std::max(worst, std::abs(actual[j] - predicted[j]));
  }
  return worst;
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  return std::sqrt(mspe(actual, predicted));
}

namespace {

double gcv_from_complement(std::span<const double> actual, std::span<const double> fitted,
                           const auto& complement) {
  double sum = 0.0;
  for (std::size_t j = 0; j < actual.size(); ++j) {
    const double leverage_gap = complement(j);
    if (leverage_gap < 1e-12) {
      return std::numeric_limits<double>::infinity();
    }
    const double r = (actual[j] - fitted[j]) / leverage_gap;
    sum += r * r;
  }
  return sum / static_cast<double>(actual.size());
}

}  // namespace

double gcv(std::span<const double> actual, std::span<const double> fitted,
           std::span<const double> smoothing_diagonal) {
  require_same_length(actual.size(), fitted.size());
  require_same_length(actual.size(), smoothing_diagonal.size());
  return gcv_from_complement(actual, fitted, [&](std::size_t j) { return 1.0 - smoothing_diagonal[j]; });
}

double gcv(std::span<const double> actual, std::span<const double> fitted, const Leverage& leverage) {
  require_same_length(actual.size(), fitted.size());
  require_same_length(actual.size(), static_cast<std::size_t>(leverage.complement.size()));
  return gcv_from_complement(actual, fitted,
                             [&](std::size_t j) { return leverage.complement(static_cast<Eigen::Index>(j)); });
}

double gcv_loo_oracle(const DesignMatrix& design, std::span<const double> observations) {
  const std::size_t rows = design.rows();
  const std::size_t cols = design.cols();
  require_same_length(rows, observations.size());
  if (rows < cols + 1) {
    throw FitError("leave-one-out needs at least n + 1 grid points");
  }
  double sum = 0.0;
  for (std::size_t held = 0; held < rows; ++held) {
    DesignMatrix reduced{Eigen::MatrixXd(rows - 1, cols), {}, design.knots};
    Eigen::MatrixXd y(1, rows - 1);
    for (std::size_t j = 0, k = 0; j < rows; ++j) {
      if (j == held) {
        continue;
      }
      reduced.entries.row(static_cast<Eigen::Index>(k)) =
          design.entries.row(static_cast<Eigen::Index>(j));
      y(0, static_cast<Eigen::Index>(k)) = observations[j];
      reduced.grid.push_back(design.grid.empty() ? 0.0 : design.grid[j]);
      ++k;
    }
    const Eigen::VectorXd beta = fit_least_squares(reduced, y).row(0).transpose();
    const double predicted = design.entries.row(static_cast<Eigen::Index>(held)).dot(beta);
    const double r = observations[held] - predicted;
    sum += r * r;
  }
  return sum / static_cast<double>(rows);
}

double mspe(std::span<const double> actual, std::span<const double> predicted) {
  require_same_length(actual.size(), predicted.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < actual.size(); ++j) {
    const double r = actual[j] - predicted[j];
    sum += r * r;
  }
  return sum / static_cast<double>(actual.size());
}

double mspe_mean(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
  require_same_shape(actual, predicted);
  const Eigen::VectorXd gap = predicted.rowwise().mean() - actual.rowwise().mean();
  return gap.squaredNorm() / static_cast<double>(actual.rows());
}

double mspe_function(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
  require_same_shape(actual, predicted);
  return (predicted - actual).squaredNorm() / static_cast<double>(actual.size());
}

ApproximationReport approximation_report(const DesignMatrix& design, std::span<const double> actual,
                                         const Eigen::VectorXd& coefficients,
                                         const Leverage& leverage) {
  const Eigen::VectorXd fitted_vec = design.entries * coefficients;
  const std::span<const double> fitted(fitted_vec.data(), static_cast<std::size_t>(fitted_vec.size()));
  return ApproximationReport{
      max_abs_error(actual, fitted),
      rmse(actual, fitted),
      gcv(actual, fitted, leverage),
      design.knots.interior().size(),
      design.knots.basis_count(),
  };
}

}  // namespace freeknot
