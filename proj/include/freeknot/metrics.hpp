#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

#include "freeknot/bspline.hpp"

namespace freeknot {

/// max_j |actual_j - predicted_j|
double max_abs_error(std::span<const double> actual, std::span<const double> predicted);

/// sqrt(mean_j (actual_j - predicted_j)^2)
double rmse(std::span<const double> actual, std::span<const double> predicted);

/// Leave-one-out shortcut (1/J) sum_j [(f_j - fhat_j) / (1 - S_jj)]^2 using the
/// per-point hat diagonal. Note this is the exact leave-one-out score of a
/// linear projection smoother rather than the trace-based GCV of Craven and
/// Wahba. Returns +infinity when any 1 - S_jj < 1e-12 (interpolating fit).
double gcv(std::span<const double> actual, std::span<const double> fitted,
           std::span<const double> smoothing_diagonal);

/// Same score using the accurate 1 - S_jj carried by `leverage`; prefer this
/// when the design is at hand.
double gcv(std::span<const double> actual, std::span<const double> fitted, const Leverage& leverage);

/// Brute-force leave-one-out score: refits J times with point j removed and
/// averages the squared prediction error at the held-out point.
double gcv_loo_oracle(const DesignMatrix& design, std::span<const double> observations);

/// Mean squared error of scalar predictions.
double mspe(std::span<const double> actual, std::span<const double> predicted);

/// Mean over subjects of (mean predicted curve - mean actual curve)^2.
/// Rows are subjects, columns the shared output grid.
double mspe_mean(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);

/// (1 / (R N)) sum_i sum_s (predicted_is - actual_is)^2
double mspe_function(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);

struct ApproximationReport {
  double max_abs_error = 0.0;
  double rmse = 0.0;
  double gcv = 0.0;
  std::size_t knot_count = 0;
  std::size_t basis_count = 0;
};

/// Fit report for one function given its design and fitted coefficients.
ApproximationReport approximation_report(const DesignMatrix& design, std::span<const double> actual,
                                         const Eigen::VectorXd& coefficients,
                                         const Leverage& leverage);

}  // namespace freeknot
