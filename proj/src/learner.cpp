#include "freeknot/learner.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "freeknot/errors.hpp"
#include "random.hpp"

namespace freeknot {
namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::tanh:
      return z.array().tanh().matrix();
    case Activation::linear:
      break;
  }
  return z;
}

// Derivative of the activation expressed through its pre-activation input.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::relu:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::tanh:
      return (1.0 - z.array().tanh().square()).matrix();
    case Activation::linear:
      break;
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(rows[k]));
  }
  return out;
}

Eigen::MatrixXd train_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("ridge lambda must be a finite non-negative number");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index in = x.cols();
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const Eigen::RowVectorXd y_mean = y.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::MatrixXd yc = y.rowwise() - y_mean;

  Eigen::MatrixXd slopes;
  if (lambda > 0.0) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + in, in);
    a.topRows(n) = xc;
    a.bottomRows(in).diagonal().setConstant(std::sqrt(lambda));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + in, y.cols());
    b.topRows(n) = yc;
    slopes = a.householderQr().solve(b);
  } else {
    // Minimum-norm solution when the centered inputs are rank deficient.
    slopes = xc.completeOrthogonalDecomposition().solve(yc);
  }
  Eigen::MatrixXd weights(in + 1, y.cols());
  weights.topRows(in) = slopes;
  weights.row(in) = y_mean - x_mean * slopes;
  return weights;
}

void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw TrainingDivergenceError("training loss became non-finite at epoch " +
                                  std::to_string(epoch));
  }
}

std::vector<DenseLayer> train_feedforward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                          const FeedforwardConfig& cfg) {
  if (cfg.activations.size() != cfg.hidden.size()) {
    throw ConfigError("need one activation per hidden layer");
  }
  if (!(cfg.learning_rate > 0.0) || cfg.epochs < 0 || cfg.batch_size < 0 || cfg.patience < 0 ||
      !(cfg.validation_split >= 0.0 && cfg.validation_split < 1.0)) {
    throw ConfigError("invalid feedforward training configuration");
  }
  std::mt19937_64 rng(cfg.seed);
  FeedforwardNetwork net = FeedforwardNetwork::initialize(
      static_cast<int>(x.cols()), cfg.hidden, cfg.activations, static_cast<int>(y.cols()), rng());

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  detail::shuffle(order, rng);
  auto validation_count = static_cast<std::size_t>(std::floor(cfg.validation_split * n));
  if (validation_count >= n) {
    validation_count = 0;
  }
  const std::vector<std::size_t> fit_rows(order.begin(), order.end() - validation_count);
  const std::vector<std::size_t> val_rows(order.end() - validation_count, order.end());
  const Eigen::MatrixXd fit_x = take_rows(x, fit_rows);
  const Eigen::MatrixXd fit_y = take_rows(y, fit_rows);
  const Eigen::MatrixXd val_x = take_rows(x, val_rows);
  const Eigen::MatrixXd val_y = take_rows(y, val_rows);

  const std::size_t batch =
      cfg.batch_size == 0 ? fit_rows.size()
                          : std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), fit_rows.size());
  std::vector<std::size_t> positions(fit_rows.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});

  std::vector<DenseLayer> best = net.layers();
  double best_score = std::numeric_limits<double>::infinity();
  int stale = 0;
  std::vector<DenseLayer> grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    detail::shuffle(positions, rng);
    for (std::size_t start = 0; start < positions.size(); start += batch) {
      const std::vector<std::size_t> idx(
          positions.begin() + static_cast<std::ptrdiff_t>(start),
          positions.begin() + static_cast<std::ptrdiff_t>(std::min(start + batch, positions.size())));
      const double loss = net.loss_and_gradient(take_rows(fit_x, idx), take_rows(fit_y, idx), grad);
      check_finite(loss, epoch);
      for (std::size_t l = 0; l < grad.size(); ++l) {
        net.layers()[l].weights -= cfg.learning_rate * grad[l].weights;
        net.layers()[l].bias -= cfg.learning_rate * grad[l].bias;
      }
    }
    const double score = validation_count > 0 ? net.loss(val_x, val_y) : net.loss(fit_x, fit_y);
    check_finite(score, epoch);
    if (score < best_score) {
      best_score = score;
      best = net.layers();
      stale = 0;
    } else if (cfg.patience > 0 && ++stale >= cfg.patience) {
      break;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  return kind == LearnerKind::ridge ? "ridge" : "feedforward";
}

std::string_view to_string(Activation activation) {
  switch (activation) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::linear:
      break;
  }
  return "linear";
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "ridge") return LearnerKind::ridge;
  if (name == "feedforward") return LearnerKind::feedforward;
  throw ConfigError("unknown learner '" + std::string(name) + "' (expected ridge or feedforward)");
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

FeedforwardNetwork::FeedforwardNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) {
    throw ConfigError("a network needs at least one layer");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.bias.size() != layer.weights.cols()) {
      throw ConfigError("layer " + std::to_string(l) + " bias does not match its width");
    }
    if (l > 0 && layer.weights.rows() != layers_[l - 1].weights.cols()) {
      throw ConfigError("layer " + std::to_string(l) + " does not chain onto the previous layer");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw ConfigError("layer " + std::to_string(l) + " has non-finite parameters");
    }
  }
}

FeedforwardNetwork FeedforwardNetwork::initialize(int input_dim, const std::vector<int>& hidden,
                                                  const std::vector<Activation>& activations,
                                                  int output_dim, std::uint64_t seed) {
  if (activations.size() != hidden.size()) {
    throw ConfigError("need one activation per hidden layer");
  }
  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  int fan_in = input_dim;
  for (std::size_t l = 0; l <= hidden.size(); ++l) {
    const int fan_out = l < hidden.size() ? hidden[l] : output_dim;
    if (fan_in < 1 || fan_out < 1) {
      throw ConfigError("layer sizes must be positive");
    }
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    DenseLayer layer{Eigen::MatrixXd(fan_in, fan_out), Eigen::VectorXd::Zero(fan_out),
                     l < hidden.size() ? activations[l] : Activation::linear};
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        layer.weights(r, c) = limit * (2.0 * detail::uniform01(rng) - 1.0);
      }
    }
    layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return FeedforwardNetwork(std::move(layers));
}

Eigen::MatrixXd FeedforwardNetwork::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != layers_.front().weights.rows()) {
    throw DataError("network expects " + std::to_string(layers_.front().weights.rows()) +
                    " inputs, got " + std::to_string(inputs.cols()));
  }
  Eigen::MatrixXd a = inputs;
  for (const DenseLayer& layer : layers_) {
    a = activate((a * layer.weights).rowwise() + layer.bias.transpose(), layer.activation);
  }
  return a;
}

double FeedforwardNetwork::loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const {
  const Eigen::MatrixXd out = forward(inputs);
  return (out - targets).squaredNorm() / static_cast<double>(targets.size());
}

double FeedforwardNetwork::loss_and_gradient(const Eigen::MatrixXd& inputs,
                                             const Eigen::MatrixXd& targets,
                                             std::vector<DenseLayer>& gradient) const {
  if (targets.rows() != inputs.rows() || targets.cols() != layers_.back().weights.cols()) {
    throw DataError("targets do not match the network output shape");
  }
  std::vector<Eigen::MatrixXd> acts{inputs};
  std::vector<Eigen::MatrixXd> pre;
  for (const DenseLayer& layer : layers_) {
    pre.push_back((acts.back() * layer.weights).rowwise() + layer.bias.transpose());
    acts.push_back(activate(pre.back(), layer.activation));
  }
  const Eigen::MatrixXd residual = acts.back() - targets;
  const auto count = static_cast<double>(targets.size());

  gradient.resize(layers_.size());
  Eigen::MatrixXd delta = (2.0 / count) * residual;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    delta = delta.cwiseProduct(activation_slope(pre[l], layers_[l].activation));
    gradient[l].weights = acts[l].transpose() * delta;
    gradient[l].bias = delta.colwise().sum().transpose();
    gradient[l].activation = layers_[l].activation;
    if (l > 0) {
      delta = delta * layers_[l].weights.transpose();
    }
  }
  return residual.squaredNorm() / count;
}

Eigen::MatrixXd LearnerState::predict(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != input_dim) {
    throw DataError("learner expects " + std::to_string(input_dim) + " input coefficients, got " +
                    std::to_string(inputs.cols()));
  }
  if (kind == LearnerKind::ridge) {
    return (inputs * ridge_weights.topRows(input_dim)).rowwise() + ridge_weights.row(input_dim);
  }
  return FeedforwardNetwork(layers).forward(inputs);
}

LearnerState train_learner(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs,
                           const LearnerConfig& config) {
  if (inputs.rows() != outputs.rows()) {
    throw DataError("input and output coefficient sets have " + std::to_string(inputs.rows()) +
                    " and " + std::to_string(outputs.rows()) + " rows");
  }
  if (inputs.rows() < 1 || inputs.cols() < 1 || outputs.cols() < 1) {
    throw DataError("training needs at least one sample with non-empty coefficient vectors");
  }
  if (!inputs.allFinite() || !outputs.allFinite()) {
    throw DataError("training coefficients must be finite");
  }
  LearnerState state;
  state.kind = config.kind;
  state.config = config;
  state.input_dim = static_cast<int>(inputs.cols());
  state.output_dim = static_cast<int>(outputs.cols());
  if (config.kind == LearnerKind::ridge) {
    state.ridge_weights = train_ridge(inputs, outputs, config.ridge.lambda);
  } else {
    state.layers = train_feedforward(inputs, outputs, config.feedforward);
  }
  return state;
}

}  // namespace freeknot
