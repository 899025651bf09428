#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freeknot {

enum class LearnerKind { ridge, feedforward };
enum class Activation { relu, tanh, linear };

std::string_view to_string(LearnerKind kind);
std::string_view to_string(Activation activation);
LearnerKind parse_learner_kind(std::string_view name);
Activation parse_activation(std::string_view name);

struct RidgeConfig {
  /// Penalty on the slope weights; the intercept is never penalized.
  double lambda = 1e-8;

  friend bool operator==(const RidgeConfig&, const RidgeConfig&) = default;
};

struct FeedforwardConfig {
  std::vector<int> hidden = {64, 64};
  /// One per hidden layer; the output layer is always linear.
  std::vector<Activation> activations = {Activation::tanh, Activation::tanh};
  double learning_rate = 0.01;
  int epochs = 300;
  /// Mini-batch size; 0 means full batch.
  int batch_size = 32;
  /// Epochs without validation improvement before stopping; 0 disables.
  int patience = 10;
  double validation_split = 0.1;
  std::uint64_t seed = 0;

  friend bool operator==(const FeedforwardConfig&, const FeedforwardConfig&) = default;
};

struct LearnerConfig {
  LearnerKind kind = LearnerKind::ridge;
  RidgeConfig ridge;
  FeedforwardConfig feedforward;

  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

/// Fully connected layer acting on row-major samples: out = act(in * weights + bias^T).
struct DenseLayer {
  Eigen::MatrixXd weights;  // fan_in x fan_out
  Eigen::VectorXd bias;     // fan_out
  Activation activation = Activation::linear;

  friend bool operator==(const DenseLayer& a, const DenseLayer& b) {
    return a.activation == b.activation && a.weights.rows() == b.weights.rows() &&
           a.weights.cols() == b.weights.cols() && a.weights == b.weights &&
           a.bias.size() == b.bias.size() && a.bias == b.bias;
  }
};

class FeedforwardNetwork {
 public:
  explicit FeedforwardNetwork(std::vector<DenseLayer> layers);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
  static FeedforwardNetwork initialize(int input_dim, const std::vector<int>& hidden,
                                       const std::vector<Activation>& activations, int output_dim,
                                       std::uint64_t seed);

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  int input_dim() const noexcept { return static_cast<int>(layers_.front().weights.rows()); }
  int output_dim() const noexcept { return static_cast<int>(layers_.back().weights.cols()); }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;

  /// Mean over every sample and output of the squared error.
  double loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const;

  /// Loss plus its gradient, laid out with the same shapes as layers().
  double loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                           std::vector<DenseLayer>& gradient) const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Trained map from input coefficient vectors to output coefficient vectors.
struct LearnerState {
  LearnerKind kind = LearnerKind::ridge;
  LearnerConfig config;
  int input_dim = 0;
  int output_dim = 0;
  /// Ridge: (input_dim + 1) x output_dim, slopes on top and intercept in the last row.
  Eigen::MatrixXd ridge_weights;
  /// Feedforward layers.
  std::vector<DenseLayer> layers;

  /// Rows are samples.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& inputs) const;

  friend bool operator==(const LearnerState& a, const LearnerState& b) {
    return a.kind == b.kind && a.config == b.config && a.input_dim == b.input_dim &&
           a.output_dim == b.output_dim && a.ridge_weights.rows() == b.ridge_weights.rows() &&
           a.ridge_weights.cols() == b.ridge_weights.cols() && a.ridge_weights == b.ridge_weights &&
           a.layers == b.layers;
  }
};

/// Fits the configured learner on paired rows of `inputs` (N x n_x) and `outputs` (N x n_y).
LearnerState train_learner(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs,
                           const LearnerConfig& config);

}  // namespace freeknot
