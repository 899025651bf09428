#pragma once

// Synthetic function-on-function data generated by a known linear operator
// acting on spline coefficients.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "freeknot/bspline.hpp"
#include "freeknot/knots.hpp"
#include "freeknot/sampled.hpp"

namespace freeknot::testing {

struct FofData {
  FunctionSet inputs;
  FunctionSet outputs;
  Eigen::MatrixXd operator_matrix;  // n_x x n_y
  Eigen::RowVectorXd offset;        // n_y
};

/// Inputs are random curves in span(input_knots); outputs are the curves with
/// coefficients x * operator_matrix + offset in span(output_knots).
inline FofData linear_fof(std::mt19937_64& rng, std::size_t subjects, const KnotSequence& input_knots,
                          const KnotSequence& output_knots, const std::vector<double>& input_grid,
                          const std::vector<double>& output_grid) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto nx = static_cast<Eigen::Index>(input_knots.basis_count());
  const auto ny = static_cast<Eigen::Index>(output_knots.basis_count());
  auto draw = [&](Eigen::Index r, Eigen::Index c, double scale) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * g(rng);
    return m;
  };
  const Eigen::MatrixXd a = draw(nx, ny, 1.0 / std::sqrt(static_cast<double>(nx)));
  const Eigen::RowVectorXd b = draw(1, ny, 0.5);
  const Eigen::MatrixXd x = draw(static_cast<Eigen::Index>(subjects), nx, 1.0);
  const Eigen::MatrixXd y = (x * a).rowwise() + b;
  const Eigen::MatrixXd bx = design_matrix(input_knots, input_grid).entries;
  const Eigen::MatrixXd by = design_matrix(output_knots, output_grid).entries;
  return FofData{FunctionSet(input_grid, x * bx.transpose()), FunctionSet(output_grid, y * by.transpose()), a, b};
}

}  // namespace freeknot::testing
