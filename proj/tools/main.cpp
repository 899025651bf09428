#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "freeknot/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNumerical = 4 };

int fail(int code, const std::string& message) {
  std::cerr << "freeknot: error: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace freeknot::cli;

  CLI::App app{"Free-knot B-spline placement, fitting, and function-on-function regression"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "Directory for output files (default: $FREEKNOT_OUTPUT_DIR or .)");

  PlaceOptions place;
  auto* place_cmd = app.add_subcommand("place", "Place knots for a dataset and report per-span bounds");
  place_cmd->add_option("dataset", place.dataset, "Wide CSV dataset")->required();
  place_cmd->add_option("--degree", place.degree, "Spline degree")->check(CLI::NonNegativeNumber);
  auto* place_eps = place_cmd->add_option("--epsilon", place.epsilon, "Error tolerance");
  auto* place_knots = place_cmd->add_option("--knots", place.knots, "Interior knot count");
  place_eps->excludes(place_knots);
  place_cmd->add_option("--method", place.method, "ilp or equidistant")->check(CLI::IsMember({"ilp", "equidistant"}));
  place_cmd->add_option("--smoothing", place.smoothing, "Odd moving-average window on derivative estimates");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit of every column on a knots document");
  fit_cmd->add_option("dataset", fit.dataset, "Wide CSV dataset")->required();
  fit_cmd->add_option("knots", fit.knots, "Knots document")->required();

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Sweep ILP against equidistant placement");
  compare_cmd->add_option("dataset", compare.dataset, "Wide CSV dataset")->required();
  compare_cmd->add_option("--degrees", compare.degrees, "Comma-separated degrees")->delimiter(',');
  compare_cmd->add_option("--sweep", compare.sweep, "knots:10,20,... or eps:1e-2,...")->required();
  compare_cmd->add_option("--smoothing", compare.smoothing, "Odd moving-average window on derivative estimates");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a function-on-function model and evaluate it on held-out subjects");
  train_cmd->add_option("inputs", train.inputs, "Input curves CSV")->required();
  train_cmd->add_option("outputs", train.outputs, "Output curves CSV")->required();
  train_cmd->add_option("--degree-x", train.degree_x, "Input spline degree")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--degree-y", train.degree_y, "Output spline degree")->check(CLI::NonNegativeNumber);
  auto* eps_x = train_cmd->add_option("--eps-x", train.eps_x, "Input tolerance (default 1e-3)");
  auto* eps_y = train_cmd->add_option("--eps-y", train.eps_y, "Output tolerance (default 1e-3)");
  train_cmd->add_option("--knots-x", train.knots_x, "Equidistant input knots instead of ILP")->excludes(eps_x);
  train_cmd->add_option("--knots-y", train.knots_y, "Equidistant output knots instead of ILP")->excludes(eps_y);
  train_cmd->add_flag("--no-normalize", train.no_normalize, "Skip rescaling to [-1, 1]");
  train_cmd->add_option("--learner", train.learner, "ridge or feedforward")->check(CLI::IsMember({"ridge", "feedforward"}));
  train_cmd->add_option("--lambda", train.lambda, "Ridge penalty");
  train_cmd->add_option("--hidden", train.hidden, "Hidden layer widths")->delimiter(',');
  train_cmd->add_option("--activation", train.activation, "relu, tanh or linear");
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--learning-rate", train.learning_rate);
  train_cmd->add_option("--batch-size", train.batch_size, "0 for full batch");
  train_cmd->add_option("--patience", train.patience, "0 disables early stopping");
  train_cmd->add_option("--seed", train.seed, "Split and initialization seed");
  train_cmd->add_option("--train-fraction", train.train_fraction, "Share of subjects used for training");

  PredictOptions pred;
  auto* predict_cmd = app.add_subcommand("predict", "Predict output curves for new inputs");
  predict_cmd->add_option("model", pred.model, "m2p model document")->required();
  predict_cmd->add_option("inputs", pred.inputs, "Input curves CSV")->required();
  predict_cmd->add_option("--output-grid", pred.output_grid, "start:stop:count (default: training output grid)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::filesystem::path dir = ".";
  if (!out_dir.empty()) {
    dir = out_dir;
  } else if (const char* env = std::getenv("FREEKNOT_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    dir = env;
  }

  try {
    if (*place_cmd) run_place(place, dir);
    if (*fit_cmd) run_fit(fit, dir);
    if (*compare_cmd) run_compare(compare, dir);
    if (*train_cmd) run_train(train, dir);
    if (*predict_cmd) run_predict(pred, dir);
  } catch (const freeknot::ConfigError& e) {
    return fail(kUsage, e.what());
  } catch (const freeknot::DataError& e) {
    return fail(kData, e.what());
  } catch (const freeknot::DomainError& e) {
    return fail(kData, e.what());
  } catch (const freeknot::FitError& e) {
    return fail(kNumerical, e.what());
  } catch (const freeknot::TrainingDivergenceError& e) {
    return fail(kNumerical, e.what());
  } catch (const std::exception& e) {
    return fail(kFailure, e.what());
  }
  return kOk;
}
