#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "freeknot/knots.hpp"

namespace freeknot {

/// Value of the q-th basis function (0-based, q < n) at t, evaluated with the
/// Cox-de Boor recursion. Terms with a zero-length denominator contribute 0;
/// the last non-empty span is treated as closed at `upper`.
double basis_value(const KnotSequence& knots, std::size_t q, double t);

/// All n basis values at t. At most degree+1 entries are nonzero and they sum to 1.
Eigen::VectorXd basis_row(const KnotSequence& knots, double t);

/// J x n collocation matrix of the basis on a sampling grid.
struct DesignMatrix {
  Eigen::MatrixXd entries;
  std::vector<double> grid;
  KnotSequence knots;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

DesignMatrix design_matrix(const KnotSequence& knots, std::span<const double> grid);

/// Least-squares coefficients for every row of `observations` (N x J).
///
/// Minimizes sum_j (yhat(t_j) - y_j)^2 + ridge * |beta|^2 with a Householder
/// QR of the (optionally ridge-augmented) design matrix. With ridge == 0 a
/// basis function that vanishes on every grid point, or any other loss of
/// column rank, raises FitError. Returns an N x n matrix.
Eigen::MatrixXd fit_least_squares(const DesignMatrix& design, const Eigen::MatrixXd& observations,
                                  double ridge = 0.0);

/// Single-function convenience overload.
Eigen::VectorXd fit_least_squares(const DesignMatrix& design, std::span<const double> observations,
                                  double ridge = 0.0);

/// Knot sequence plus one coefficient row per modelled function.
class SplineModel {
 public:
  SplineModel(KnotSequence knots, Eigen::MatrixXd coefficients);

  const KnotSequence& knots() const noexcept { return knots_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  std::size_t function_count() const noexcept {
    return static_cast<std::size_t>(coefficients_.rows());
  }

  friend bool operator==(const SplineModel& a, const SplineModel& b) {
    return a.knots_ == b.knots_ && a.coefficients_.rows() == b.coefficients_.rows() &&
           a.coefficients_.cols() == b.coefficients_.cols() && a.coefficients_ == b.coefficients_;
  }

 private:
  KnotSequence knots_;
  Eigen::MatrixXd coefficients_;
};

/// sum_q B_q(t) * beta_{i,q}.
double evaluate_spline(const SplineModel& model, std::size_t function_index, double t);

/// Function `function_index` evaluated on every point of `grid`.
std::vector<double> evaluate_spline(const SplineModel& model, std::size_t function_index,
                                    std::span<const double> grid);

/// Diagonal of the hat matrix S = phi (phi^T phi)^{-1} phi^T, via the thin Q
/// factor (S_jj is the squared norm of row j of Q). Throws FitError when the
/// design is rank deficient.
Eigen::VectorXd smoothing_diagonal(const DesignMatrix& design);

/// Hat diagonal together with 1 - S_jj. For high-leverage rows the
/// complement is the squared norm of row j of the trailing Q columns, which
/// keeps full relative accuracy when S_jj is close to 1.
struct Leverage {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd complement;
};
Leverage leverage(const DesignMatrix& design);

}  // namespace freeknot
