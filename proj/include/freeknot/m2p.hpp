#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freeknot/knots.hpp"
#include "freeknot/learner.hpp"
#include "freeknot/sampled.hpp"

namespace freeknot {

/// Affine map of the value range [lower, upper] onto [-1, 1].
struct AffineScaling {
  double lower = -1.0;
  double upper = 1.0;

  double apply(double value) const noexcept;
  double invert(double scaled) const noexcept;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& values) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& scaled) const;

  friend bool operator==(const AffineScaling&, const AffineScaling&) = default;
};

/// Range of every value in the set; throws DegenerateDataError when it is a point.
AffineScaling fit_scaling(const FunctionSet& set);

/// Set rescaled to [-1, 1] together with the parameters that invert it.
std::pair<FunctionSet, AffineScaling> normalize(const FunctionSet& set);

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Seeded Fisher-Yates shuffle of 0..N-1, then the first round(N * fraction)
/// subjects (clamped to [1, N-1]) train and the rest test.
TrainTestSplit split(std::size_t subject_count, double train_fraction, std::uint64_t seed);

struct IlpPlacement {
  double epsilon;
  int smoothing_window = 1;

  friend bool operator==(const IlpPlacement&, const IlpPlacement&) = default;
};

struct EquidistantPlacement {
  std::size_t interior_count;

  friend bool operator==(const EquidistantPlacement&, const EquidistantPlacement&) = default;
};

using PlacementConfig = std::variant<IlpPlacement, EquidistantPlacement>;

/// Common basis for a function set and every function's coefficients on it.
struct Representation {
  KnotSequence knots;
  Eigen::MatrixXd coefficients;  // N x n
  std::vector<double> max_abs_error;
  std::vector<double> rmse;
  std::vector<std::size_t> forced_spans;
};

/// Places one knot sequence for the whole set (ILP on the derivative envelope,
/// or equidistant) and least-squares fits every function on it.
Representation fit_representation(const FunctionSet& set, int degree, const PlacementConfig& placement);

struct M2PConfig {
  int input_degree = 3;
  int output_degree = 3;
  PlacementConfig input_placement = IlpPlacement{1e-3};
  PlacementConfig output_placement = IlpPlacement{1e-3};
  /// Rescale each variable to [-1, 1] using training-subject statistics.
  bool normalize = true;
  LearnerConfig learner;

  friend bool operator==(const M2PConfig&, const M2PConfig&) = default;
};

struct M2PModel {
  KnotSequence input_knots;
  KnotSequence output_knots;
  int input_dim = 0;
  int output_dim = 0;
  LearnerState learner;
  AffineScaling input_scaling;
  AffineScaling output_scaling;
  /// Grid the training outputs were observed on; default prediction grid.
  std::vector<double> output_grid;
  M2PConfig config;

  friend bool operator==(const M2PModel&, const M2PModel&) = default;
};

/// Fits both representations on the given (training) subjects and trains the
/// parameter-space learner on the coefficient pairs.
M2PModel train_m2p(const FunctionSet& inputs, const FunctionSet& outputs, const M2PConfig& config);

/// Predicted output curve on `output_grid`.
std::vector<double> predict(const M2PModel& model, const SampledFunction& input,
                            std::span<const double> output_grid);

/// Predicted output curve on the training output grid.
std::vector<double> predict(const M2PModel& model, const SampledFunction& input);

/// One predicted curve per input row, on `output_grid` (rows = subjects).
Eigen::MatrixXd predict(const M2PModel& model, const FunctionSet& inputs,
                        std::span<const double> output_grid);

struct SubjectEvaluation {
  std::string name;
  double mean_gap = 0.0;       // mean predicted - mean actual
  double squared_error = 0.0;  // mean over the grid of squared residuals
};

struct Evaluation {
  double mspe_mean = 0.0;
  double mspe_function = 0.0;
  std::vector<SubjectEvaluation> subjects;
};

/// Predicts every test subject on the test output grid and aggregates MSPE_M and MSPE_F.
Evaluation evaluate(const M2PModel& model, const FunctionSet& test_inputs,
                    const FunctionSet& test_outputs);

}  // namespace freeknot
