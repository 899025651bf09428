#include "freeknot/bspline.hpp"

#include <cmath>
#include <string>

#include "freeknot/errors.hpp"

namespace freeknot {
namespace {

// Cox-de Boor recursion on the expanded vector `u`, index q (0-based).
double cox_de_boor(const std::vector<double>& u, double upper, std::size_t q, int p, double t) {
  if (p == 0) {
    if (u[q] <= t && t < u[q + 1]) {
      return 1.0;
    }
    // Right boundary: the last non-empty span is closed at `upper`.
    return (t == upper && u[q] < u[q + 1] && u[q + 1] == upper) ? 1.0 : 0.0;
  }
  double value = 0.0;
  const double left_width = u[q + p] - u[q];
  if (left_width > 0.0) {
    value += (t - u[q]) / left_width * cox_de_boor(u, upper, q, p - 1, t);
  }
  const double right_width = u[q + p + 1] - u[q + 1];
  if (right_width > 0.0) {
    value += (u[q + p + 1] - t) / right_width * cox_de_boor(u, upper, q + 1, p - 1, t);
  }
  return value;
}

// Nonzero basis values at t for span m: entries for functions m-p .. m.
void nonzero_basis(const KnotSequence& knots, std::size_t m, double t, std::span<double> out) {
  const int p = knots.degree();
  const auto& u = knots.expanded();
  std::vector<double> left(p + 1), right(p + 1);
  out[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - u[m + 1 - j];
    right[j] = u[m + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

void require_ridge(double ridge) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw ConfigError("ridge must be a finite non-negative number");
  }
}

void require_full_rank(const DesignMatrix& design) {
  const Eigen::Index rows = design.entries.rows();
  const Eigen::Index cols = design.entries.cols();
  for (Eigen::Index q = 0; q < cols; ++q) {
    if (design.entries.col(q).cwiseAbs().maxCoeff() == 0.0) {
      throw FitError("basis function " + std::to_string(q) +
                         " is zero at every grid point; the knot sequence leaves it without data",
                     static_cast<std::size_t>(q));
    }
  }
  if (rows < cols) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.entries);
    const auto dependent = static_cast<std::size_t>(qr.colsPermutation().indices()(qr.rank()));
    throw FitError("design has " + std::to_string(rows) + " grid points for " + std::to_string(cols) +
                       " basis functions; basis function " + std::to_string(dependent) +
                       " is not determined by the grid",
                   dependent);
  }
}

}  // namespace

double basis_value(const KnotSequence& knots, std::size_t q, double t) {
  if (q >= knots.basis_count()) {
    throw DomainError("basis index " + std::to_string(q) + " out of range for " +
                      std::to_string(knots.basis_count()) + " basis functions");
  }
  if (!knots.contains(t)) {
    throw DomainError("t = " + std::to_string(t) + " outside the knot domain");
  }
  return cox_de_boor(knots.expanded(), knots.upper(), q, knots.degree(), t);
}

Eigen::VectorXd basis_row(const KnotSequence& knots, double t) {
  const std::size_t m = knots.find_span(t);
  const int p = knots.degree();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(knots.basis_count()));
  std::vector<double> local(p + 1);
  nonzero_basis(knots, m, t, local);
  for (int r = 0; r <= p; ++r) {
    row(static_cast<Eigen::Index>(m - p + r)) = local[r];
  }
  return row;
}

DesignMatrix design_matrix(const KnotSequence& knots, std::span<const double> grid) {
  const int p = knots.degree();
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()),
                                                  static_cast<Eigen::Index>(knots.basis_count()));
  std::vector<double> local(p + 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::size_t m = knots.find_span(grid[j]);
    nonzero_basis(knots, m, grid[j], local);
    for (int r = 0; r <= p; ++r) {
      entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m - p + r)) = local[r];
    }
  }
  return DesignMatrix{std::move(entries), std::vector<double>(grid.begin(), grid.end()), knots};
}

Eigen::MatrixXd fit_least_squares(const DesignMatrix& design, const Eigen::MatrixXd& observations,
                                  double ridge) {
  require_ridge(ridge);
  const Eigen::Index rows = design.entries.rows();
  const Eigen::Index cols = design.entries.cols();
  if (observations.cols() != rows) {
    throw DataError("observations have " + std::to_string(observations.cols()) +
                    " samples but the design has " + std::to_string(rows) + " rows");
  }

  if (ridge == 0.0) {
    require_full_rank(design);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.entries);
    if (qr.rank() < cols) {
      const auto dependent = static_cast<std::size_t>(qr.colsPermutation().indices()(qr.rank()));
      throw FitError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                         std::to_string(cols) + "); basis function " + std::to_string(dependent) +
                         " is not determined by the grid",
                     dependent);
    }
    return qr.solve(observations.transpose()).transpose();
  }

  Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(rows + cols, cols);
  augmented.topRows(rows) = design.entries;
  augmented.bottomRows(cols).diagonal().setConstant(std::sqrt(ridge));
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(rows + cols, observations.rows());
  rhs.topRows(rows) = observations.transpose();
  return augmented.householderQr().solve(rhs).transpose();
}

Eigen::VectorXd fit_least_squares(const DesignMatrix& design, std::span<const double> observations,
                                  double ridge) {
  const Eigen::Map<const Eigen::RowVectorXd> row(observations.data(),
                                                 static_cast<Eigen::Index>(observations.size()));
  return fit_least_squares(design, Eigen::MatrixXd(row), ridge).row(0).transpose();
}

SplineModel::SplineModel(KnotSequence knots, Eigen::MatrixXd coefficients)
    : knots_(std::move(knots)), coefficients_(std::move(coefficients)) {
  if (static_cast<std::size_t>(coefficients_.cols()) != knots_.basis_count()) {
    throw DataError("coefficient rows have " + std::to_string(coefficients_.cols()) +
                    " entries but the knot sequence has " + std::to_string(knots_.basis_count()) +
                    " basis functions");
  }
}

double evaluate_spline(const SplineModel& model, std::size_t function_index, double t) {
  if (function_index >= model.function_count()) {
    throw DomainError("function index " + std::to_string(function_index) + " out of range");
  }
  const KnotSequence& knots = model.knots();
  const std::size_t m = knots.find_span(t);
  const int p = knots.degree();
  std::vector<double> local(p + 1);
  nonzero_basis(knots, m, t, local);
  double value = 0.0;
  for (int r = 0; r <= p; ++r) {
    value += local[r] * model.coefficients()(static_cast<Eigen::Index>(function_index),
                                             static_cast<Eigen::Index>(m - p + r));
  }
  return value;
}

std::vector<double> evaluate_spline(const SplineModel& model, std::size_t function_index,
                                    std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    out.push_back(evaluate_spline(model, function_index, t));
  }
  return out;
}

Leverage leverage(const DesignMatrix& design) {
  require_full_rank(design);
  const Eigen::Index rows = design.entries.rows();
  const Eigen::Index cols = design.entries.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.entries);
  if (qr.rank() < cols) {
    throw FitError("design matrix is rank deficient; the smoothing matrix is undefined");
  }
  const Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  Leverage result{thin_q.rowwise().squaredNorm(), Eigen::VectorXd(rows)};
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (result.diagonal(j) <= 0.5) {
      result.complement(j) = 1.0 - result.diagonal(j);
      continue;
    }
    // 1 - S_jj directly from the orthogonal complement avoids cancellation
    Eigen::VectorXd q_row = Eigen::VectorXd::Unit(rows, j);
    q_row.applyOnTheLeft(qr.householderQ().adjoint());
    result.complement(j) = q_row.tail(rows - cols).squaredNorm();
  }
  return result;
}

Eigen::VectorXd smoothing_diagonal(const DesignMatrix& design) {
  return leverage(design).diagonal;
}

}  // namespace freeknot
