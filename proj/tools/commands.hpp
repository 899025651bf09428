#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "freeknot/learner.hpp"

namespace freeknot::cli {

struct PlaceOptions {
  std::filesystem::path dataset;
  int degree = 3;
  std::optional<double> epsilon;
  std::optional<std::size_t> knots;
  std::string method = "ilp";
  int smoothing = 1;
};

struct FitOptions {
  std::filesystem::path dataset;
  std::filesystem::path knots;
};

struct CompareOptions {
  std::filesystem::path dataset;
  std::vector<int> degrees = {1, 2, 3};
  std::string sweep;
  int smoothing = 1;
};

struct TrainOptions {
  std::filesystem::path inputs;
  std::filesystem::path outputs;
  int degree_x = 3;
  int degree_y = 3;
  std::optional<double> eps_x;
  std::optional<double> eps_y;
  std::optional<std::size_t> knots_x;
  std::optional<std::size_t> knots_y;
  bool no_normalize = false;
  std::string learner = "ridge";
  double lambda = 1e-8;
  std::vector<int> hidden = {64, 64};
  std::string activation = "tanh";
  int epochs = 300;
  double learning_rate = 0.01;
  int batch_size = 32;
  int patience = 10;
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
};

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path inputs;
  std::string output_grid;
};

// Each command writes its files under `out_dir` and a short summary to stdout.
void run_place(const PlaceOptions& opt, const std::filesystem::path& out_dir);
void run_fit(const FitOptions& opt, const std::filesystem::path& out_dir);
void run_compare(const CompareOptions& opt, const std::filesystem::path& out_dir);
void run_train(const TrainOptions& opt, const std::filesystem::path& out_dir);
void run_predict(const PredictOptions& opt, const std::filesystem::path& out_dir);

/// "start:stop:count" evenly spaced points, both ends included.
std::vector<double> parse_grid_spec(const std::string& spec);

struct Sweep {
  bool by_knots = true;
  std::vector<std::size_t> knot_counts;
  std::vector<double> epsilons;
};

/// "knots:10,20,40" or "eps:1e-2,1e-3".
Sweep parse_sweep(const std::string& spec);

}  // namespace freeknot::cli
