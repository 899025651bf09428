#include "freeknot/m2p.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "freeknot/bspline.hpp"
#include "freeknot/errors.hpp"
#include "freeknot/metrics.hpp"
#include "freeknot/placement.hpp"
#include "random.hpp"

namespace freeknot {

double AffineScaling::apply(double value) const noexcept {
  return 2.0 * (value - lower) / (upper - lower) - 1.0;
}

double AffineScaling::invert(double scaled) const noexcept {
  return lower + (scaled + 1.0) * (upper - lower) / 2.0;
}

Eigen::MatrixXd AffineScaling::apply(const Eigen::MatrixXd& values) const {
  return values.unaryExpr([this](double v) { return apply(v); });
}

Eigen::MatrixXd AffineScaling::invert(const Eigen::MatrixXd& scaled) const {
  return scaled.unaryExpr([this](double v) { return invert(v); });
}

AffineScaling fit_scaling(const FunctionSet& set) {
  const double lo = set.values().minCoeff();
  const double hi = set.values().maxCoeff();
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DataError("cannot normalize non-finite values");
  }
  if (!(hi > lo)) {
    throw DegenerateDataError("all values equal " + std::to_string(lo) +
                              "; a zero range cannot be normalized");
  }
  return AffineScaling{lo, hi};
}

std::pair<FunctionSet, AffineScaling> normalize(const FunctionSet& set) {
  const AffineScaling scaling = fit_scaling(set);
  FunctionSet scaled(std::vector<double>(set.grid().begin(), set.grid().end()),
                     scaling.apply(set.values()), set.names());
  return {std::move(scaled), scaling};
}

TrainTestSplit split(std::size_t subject_count, double train_fraction, std::uint64_t seed) {
  if (subject_count < 2) {
    throw ConfigError("a train/test split needs at least two subjects");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  std::vector<std::size_t> order(subject_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  detail::shuffle(order, rng);

  auto train_count =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(subject_count)));
  train_count = std::clamp<std::size_t>(train_count, 1, subject_count - 1);

  TrainTestSplit result;
  result.seed = seed;
  result.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
  result.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  std::sort(result.train.begin(), result.train.end());
  std::sort(result.test.begin(), result.test.end());
  return result;
}

Representation fit_representation(const FunctionSet& set, int degree, const PlacementConfig& placement) {
  if (set.sample_count() < 2) {
    throw InsufficientDataError(
        "a spline representation needs at least two grid points; encode scalar targets as a "
        "constant curve");
  }
  const auto grid = set.grid();
  std::vector<std::size_t> forced;
  KnotSequence knots = std::visit(
      [&](const auto& cfg) -> KnotSequence {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, IlpPlacement>) {
          const DerivativeEnvelope envelope = derivative_envelope(set, degree, cfg.smoothing_window);
          Placement placed = ilp_place_knots(envelope, degree, cfg.epsilon);
          forced = std::move(placed.forced_spans);
          return std::move(placed.knots);
        } else {
          return equidistant_knots(grid.front(), grid.back(), degree, cfg.interior_count);
        }
      },
      placement);

  const DesignMatrix design = design_matrix(knots, grid);
  Eigen::MatrixXd coefficients = fit_least_squares(design, set.values());
  const Eigen::MatrixXd fitted = coefficients * design.entries.transpose();

  Representation rep{std::move(knots), std::move(coefficients), {}, {}, std::move(forced)};
  for (Eigen::Index i = 0; i < fitted.rows(); ++i) {
    const Eigen::RowVectorXd actual_row = set.values().row(i);
    const Eigen::RowVectorXd fitted_row = fitted.row(i);
    const std::span<const double> actual(actual_row.data(), static_cast<std::size_t>(actual_row.size()));
    const std::span<const double> approx(fitted_row.data(), static_cast<std::size_t>(fitted_row.size()));
    rep.max_abs_error.push_back(max_abs_error(actual, approx));
    rep.rmse.push_back(rmse(actual, approx));
  }
  return rep;
}

M2PModel train_m2p(const FunctionSet& inputs, const FunctionSet& outputs, const M2PConfig& config) {
  if (inputs.function_count() != outputs.function_count()) {
    throw DataError("input set has " + std::to_string(inputs.function_count()) +
                    " subjects but output set has " + std::to_string(outputs.function_count()));
  }
  AffineScaling input_scaling;
  AffineScaling output_scaling;
  const FunctionSet* x = &inputs;
  const FunctionSet* y = &outputs;
  std::optional<FunctionSet> x_scaled;
  std::optional<FunctionSet> y_scaled;
  if (config.normalize) {
    auto [xs, xp] = normalize(inputs);
    auto [ys, yp] = normalize(outputs);
    x_scaled.emplace(std::move(xs));
    y_scaled.emplace(std::move(ys));
    input_scaling = xp;
    output_scaling = yp;
    x = &*x_scaled;
    y = &*y_scaled;
  }

  Representation in_rep = fit_representation(*x, config.input_degree, config.input_placement);
  Representation out_rep = fit_representation(*y, config.output_degree, config.output_placement);
  LearnerState learner = train_learner(in_rep.coefficients, out_rep.coefficients, config.learner);

  const int input_dim = static_cast<int>(in_rep.knots.basis_count());
  const int output_dim = static_cast<int>(out_rep.knots.basis_count());
  return M2PModel{std::move(in_rep.knots),
                  std::move(out_rep.knots),
                  input_dim,
                  output_dim,
                  std::move(learner),
                  input_scaling,
                  output_scaling,
                  std::vector<double>(outputs.grid().begin(), outputs.grid().end()),
                  config};
}

Eigen::MatrixXd predict(const M2PModel& model, const FunctionSet& inputs,
                        std::span<const double> output_grid) {
  if (model.learner.input_dim != model.input_dim || model.learner.output_dim != model.output_dim) {
    throw ConfigError("model learner dimensions do not match its bases");
  }
  const DesignMatrix in_design = design_matrix(model.input_knots, inputs.grid());
  const DesignMatrix out_design = design_matrix(model.output_knots, output_grid);
  const Eigen::MatrixXd in_coeffs =
      fit_least_squares(in_design, model.input_scaling.apply(inputs.values()));
  const Eigen::MatrixXd out_coeffs = model.learner.predict(in_coeffs);
  return model.output_scaling.invert(out_coeffs * out_design.entries.transpose());
}

std::vector<double> predict(const M2PModel& model, const SampledFunction& input,
                            std::span<const double> output_grid) {
  const auto values = input.values();
  Eigen::MatrixXd row(1, static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), row.data());
  const FunctionSet single(std::vector<double>(input.grid().begin(), input.grid().end()), std::move(row));
  const Eigen::MatrixXd out = predict(model, single, output_grid);
  return std::vector<double>(out.data(), out.data() + out.size());
}

std::vector<double> predict(const M2PModel& model, const SampledFunction& input) {
  return predict(model, input, model.output_grid);
}

Evaluation evaluate(const M2PModel& model, const FunctionSet& test_inputs,
                    const FunctionSet& test_outputs) {
  if (test_inputs.function_count() != test_outputs.function_count()) {
    throw DataError("test input and output sets have different subject counts");
  }
  const Eigen::MatrixXd predicted = predict(model, test_inputs, test_outputs.grid());
  const Eigen::MatrixXd& actual = test_outputs.values();
  Evaluation result{mspe_mean(actual, predicted), mspe_function(actual, predicted), {}};
  for (Eigen::Index i = 0; i < actual.rows(); ++i) {
    result.subjects.push_back({test_outputs.names()[static_cast<std::size_t>(i)],
                               predicted.row(i).mean() - actual.row(i).mean(),
                               (predicted.row(i) - actual.row(i)).squaredNorm() /
                                   static_cast<double>(actual.cols())});
  }
  return result;
}

}  // namespace freeknot
