#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace freeknot::testing {

/// Leave-one-out score from explicit refits: for each j, solve the reduced
/// least-squares problem by SVD and square the miss at point j.
/// Empty when any reduced system is rank deficient.
inline std::optional<double> svd_refit_loo(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
  const Eigen::Index rows = basis.rows();
  double total = 0.0;
  for (Eigen::Index j = 0; j < rows; ++j) {
    Eigen::MatrixXd b(rows - 1, basis.cols());
    Eigen::VectorXd obs(rows - 1);
    for (Eigen::Index r = 0, k = 0; r < rows; ++r) {
      if (r == j) continue;
      b.row(k) = basis.row(r);
      obs(k) = y(r);
      ++k;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-8 * sv(0)) return std::nullopt;
    const Eigen::VectorXd c = svd.solve(obs);
    const double miss = y(j) - basis.row(j).dot(c);
    total += miss * miss;
  }
  return total / static_cast<double>(rows);
}

}  // namespace freeknot::testing
