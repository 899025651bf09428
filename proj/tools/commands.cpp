#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "freeknot/bspline.hpp"
#include "freeknot/dataio.hpp"
#include "freeknot/errors.hpp"
#include "freeknot/m2p.hpp"
#include "freeknot/metrics.hpp"
#include "freeknot/placement.hpp"

namespace freeknot::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid " + what + " '" + text + "'");
  }
  return value;
}

std::string safe_file_stem(const std::string& name, std::set<std::string>& used) {
  std::string stem;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    stem += keep ? c : '_';
  }
  if (stem.empty() || stem.front() == '.') {
    stem.insert(stem.begin(), '_');
  }
  std::string unique = stem;
  for (int k = 2; !used.insert(unique).second; ++k) {
    unique = stem + "_" + std::to_string(k);
  }
  return unique;
}

std::string row_csv(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line + '\n';
}

std::string knots_summary(const KnotSequence& knots) {
  return std::to_string(knots.interior().size()) + " interior knots, " + std::to_string(knots.basis_count()) +
         " basis functions";
}

struct FunctionFit {
  std::vector<ApproximationReport> reports;
  Eigen::MatrixXd coefficients;
  Eigen::MatrixXd fitted;
};

FunctionFit fit_all(const FunctionSet& set, const KnotSequence& knots) {
  const DesignMatrix design = design_matrix(knots, set.grid());
  FunctionFit out;
  out.coefficients = fit_least_squares(design, set.values());
  out.fitted = out.coefficients * design.entries.transpose();
  const Leverage lev = leverage(design);
  for (Eigen::Index i = 0; i < set.values().rows(); ++i) {
    const Eigen::RowVectorXd row = set.values().row(i);
    out.reports.push_back(approximation_report(
        design, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
        out.coefficients.row(i).transpose(), lev));
  }
  return out;
}

PlacementConfig placement_for(const std::optional<double>& eps, const std::optional<std::size_t>& knots,
                              const char* eps_flag, const char* knots_flag) {
  if (eps && knots) {
    throw ConfigError(std::string(eps_flag) + " and " + knots_flag + " are mutually exclusive");
  }
  if (knots) {
    return EquidistantPlacement{*knots};
  }
  return IlpPlacement{eps.value_or(1e-3)};
}

}  // namespace

std::vector<double> parse_grid_spec(const std::string& spec) {
  const auto parts = split_list(spec, ':');
  if (parts.size() != 3) {
    throw ConfigError("output grid must look like start:stop:count, got '" + spec + "'");
  }
  const double start = parse_number<double>(parts[0], "grid start");
  const double stop = parse_number<double>(parts[1], "grid stop");
  const auto count = parse_number<std::size_t>(parts[2], "grid count");
  if (count < 1 || !std::isfinite(start) || !std::isfinite(stop) || (count > 1 && !(stop > start))) {
    throw ConfigError("output grid needs start < stop and a positive count");
  }
  if (count == 1) {
    return {start};
  }
  std::vector<double> grid(count);
  for (std::size_t j = 0; j < count; ++j) {
    grid[j] = start + (stop - start) * static_cast<double>(j) / static_cast<double>(count - 1);
  }
  grid.back() = stop;
  return grid;
}

Sweep parse_sweep(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("sweep must look like knots:10,20 or eps:1e-2,1e-3, got '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  Sweep sweep;
  if (kind == "knots") {
    sweep.by_knots = true;
  } else if (kind == "eps" || kind == "epsilon") {
    sweep.by_knots = false;
  } else {
    throw ConfigError("unknown sweep kind '" + kind + "' (expected knots or eps)");
  }
  for (const auto& item : split_list(body, ',')) {
    if (item.empty()) {
      continue;
    }
    if (sweep.by_knots) {
      sweep.knot_counts.push_back(parse_number<std::size_t>(item, "knot count"));
    } else {
      const double eps = parse_number<double>(item, "epsilon");
      if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ConfigError("sweep epsilons must be positive");
      }
      sweep.epsilons.push_back(eps);
    }
  }
  return sweep;
}

void run_place(const PlaceOptions& opt, const fs::path& out_dir) {
  if (opt.epsilon && opt.knots) {
    throw ConfigError("--epsilon and --knots are mutually exclusive");
  }
  if (opt.method != "ilp" && opt.method != "equidistant") {
    throw ConfigError("unknown method '" + opt.method + "' (expected ilp or equidistant)");
  }
  if (opt.method == "equidistant" && !opt.knots) {
    throw ConfigError("equidistant placement needs --knots");
  }
  if (opt.method == "ilp" && !opt.epsilon && !opt.knots) {
    throw ConfigError("ilp placement needs --epsilon or --knots");
  }
  const FunctionSet set = read_function_set(opt.dataset);
  const DerivativeEnvelope envelope = derivative_envelope(set, opt.degree, opt.smoothing);
  const auto grid = set.grid();

  std::optional<double> epsilon;
  Placement placement{KnotSequence(opt.degree, grid.front(), grid.back()), {}};
  if (opt.method == "equidistant") {
    placement.knots = equidistant_knots(grid.front(), grid.back(), opt.degree, *opt.knots);
  } else if (opt.epsilon) {
    epsilon = *opt.epsilon;
    placement = ilp_place_knots(envelope, opt.degree, *epsilon);
  } else {
    TargetedPlacement tp = ilp_for_knot_count(envelope, opt.degree, *opt.knots);
    epsilon = tp.epsilon;
    placement = std::move(tp.placement);
  }

  const BoundReport report = verify_bound(placement.knots, envelope, epsilon.value_or(1.0));
  write_model(placement.knots, out_dir / "knots.json");
  write_knot_list(placement.knots, out_dir / "knot_list.csv");
  write_bound_report(report, placement.forced_spans, epsilon.has_value(), out_dir / "bounds.csv");

  std::cout << opt.method << " degree " << opt.degree << ": " << knots_summary(placement.knots);
  if (epsilon) {
    std::cout << ", epsilon " << format_number(*epsilon) << ", forced spans " << placement.forced_spans.size();
  }
  std::cout << '\n';
}

void run_fit(const FitOptions& opt, const fs::path& out_dir) {
  const FunctionSet set = read_function_set(opt.dataset);
  const KnotSequence knots = read_knots(opt.knots);
  const FunctionFit fit = fit_all(set, knots);

  write_model(SplineModel(knots, fit.coefficients), out_dir / "spline.json");
  std::string report = "function,max_abs_error,rmse,gcv,knot_count,basis_count\n";
  std::set<std::string> used;
  for (std::size_t i = 0; i < set.function_count(); ++i) {
    const ApproximationReport& r = fit.reports[i];
    report += row_csv({set.names()[i], format_number(r.max_abs_error), format_number(r.rmse), format_number(r.gcv),
                       std::to_string(r.knot_count), std::to_string(r.basis_count)});
    const Eigen::RowVectorXd actual = set.values().row(static_cast<Eigen::Index>(i));
    const Eigen::RowVectorXd fitted = fit.fitted.row(static_cast<Eigen::Index>(i));
    write_fitted_curve(set.grid(), std::span<const double>(actual.data(), set.sample_count()),
                       std::span<const double>(fitted.data(), set.sample_count()),
                       out_dir / "curves" / (safe_file_stem(set.names()[i], used) + ".csv"));
  }
  write_text(out_dir / "fit_report.csv", report);

  double worst = 0.0;
  for (const auto& r : fit.reports) worst = std::max(worst, r.max_abs_error);
  std::cout << "fitted " << set.function_count() << " functions on " << knots_summary(knots)
            << ", worst max_abs_error " << format_number(worst) << '\n';
}

void run_compare(const CompareOptions& opt, const fs::path& out_dir) {
  const Sweep sweep = parse_sweep(opt.sweep);
  if (opt.degrees.empty()) {
    throw ConfigError("--degrees needs at least one degree");
  }
  const FunctionSet set = read_function_set(opt.dataset);
  const auto grid = set.grid();
  const std::size_t points = sweep.by_knots ? sweep.knot_counts.size() : sweep.epsilons.size();

  std::vector<ComparisonRow> rows;
  std::string detail = "method,degree,knot_count,epsilon,function,max_abs_error,rmse,gcv\n";
  std::string summary = "method,degree,knot_count,epsilon,Mean_MaxAE,Mean_RMSE,Max_RMSE\n";
  for (int degree : opt.degrees) {
    const DerivativeEnvelope envelope = derivative_envelope(set, degree, opt.smoothing);
    for (std::size_t s = 0; s < points; ++s) {
      Placement ilp{KnotSequence(degree, grid.front(), grid.back()), {}};
      double epsilon = 0.0;
      if (sweep.by_knots) {
        TargetedPlacement tp = ilp_for_knot_count(envelope, degree, sweep.knot_counts[s]);
        ilp = std::move(tp.placement);
        epsilon = tp.epsilon;
      } else {
        epsilon = sweep.epsilons[s];
        ilp = ilp_place_knots(envelope, degree, epsilon);
      }
      const std::size_t count = ilp.knots.interior().size();
      const KnotSequence equi = equidistant_knots(grid.front(), grid.back(), degree, count);

      for (const auto& [method, knots] : {std::pair<std::string, const KnotSequence*>{"ilp", &ilp.knots},
                                          std::pair<std::string, const KnotSequence*>{"equidistant", &equi}}) {
        const FunctionFit fit = fit_all(set, *knots);
        const std::optional<double> eps = method == "ilp" ? std::optional<double>(epsilon) : std::nullopt;
        const std::string eps_text = eps ? format_number(*eps) : std::string();
        double sum_max = 0.0;
        double sum_rmse = 0.0;
        double sum_gcv = 0.0;
        double max_rmse = 0.0;
        for (std::size_t i = 0; i < fit.reports.size(); ++i) {
          const ApproximationReport& r = fit.reports[i];
          sum_max += r.max_abs_error;
          sum_rmse += r.rmse;
          sum_gcv += r.gcv;
          max_rmse = std::max(max_rmse, r.rmse);
          detail += row_csv({method, std::to_string(degree), std::to_string(count), eps_text, set.names()[i],
                             format_number(r.max_abs_error), format_number(r.rmse), format_number(r.gcv)});
        }
        const auto n = static_cast<double>(fit.reports.size());
        rows.push_back({method, degree, count, eps, sum_max / n, sum_rmse / n, sum_gcv / n});
        summary += row_csv({method, std::to_string(degree), std::to_string(count), eps_text,
                            format_number(sum_max / n), format_number(sum_rmse / n), format_number(max_rmse)});
      }
    }
  }
  write_report(rows, out_dir / "comparison.csv");
  write_text(out_dir / "comparison_detail.csv", detail);
  write_text(out_dir / "comparison_summary.csv", summary);
  std::cout << "compared " << rows.size() << " runs over " << set.function_count() << " functions\n";
}

void run_train(const TrainOptions& opt, const fs::path& out_dir) {
  M2PConfig config;
  config.input_degree = opt.degree_x;
  config.output_degree = opt.degree_y;
  config.input_placement = placement_for(opt.eps_x, opt.knots_x, "--eps-x", "--knots-x");
  config.output_placement = placement_for(opt.eps_y, opt.knots_y, "--eps-y", "--knots-y");
  config.normalize = !opt.no_normalize;
  config.learner.kind = parse_learner_kind(opt.learner);
  config.learner.ridge.lambda = opt.lambda;
  auto& ff = config.learner.feedforward;
  ff.hidden = opt.hidden;
  ff.activations.assign(opt.hidden.size(), parse_activation(opt.activation));
  ff.epochs = opt.epochs;
  ff.learning_rate = opt.learning_rate;
  ff.batch_size = opt.batch_size;
  ff.patience = opt.patience;
  ff.seed = opt.seed;

  const FunctionSet inputs = read_function_set(opt.inputs);
  const FunctionSet outputs = read_function_set(opt.outputs);
  if (inputs.function_count() != outputs.function_count()) {
    throw DataError(opt.inputs.string() + " has " + std::to_string(inputs.function_count()) + " subjects but " +
                    opt.outputs.string() + " has " + std::to_string(outputs.function_count()));
  }
  const TrainTestSplit parts = split(inputs.function_count(), opt.train_fraction, opt.seed);
  const M2PModel model = train_m2p(inputs.select(parts.train), outputs.select(parts.train), config);
  const Evaluation eval = evaluate(model, inputs.select(parts.test), outputs.select(parts.test));

  write_model(model, out_dir / "m2p.json");
  std::string metrics = "metric,value\n";
  metrics += row_csv({"mspe_mean", format_number(eval.mspe_mean)});
  metrics += row_csv({"mspe_function", format_number(eval.mspe_function)});
  metrics += row_csv({"train_subjects", std::to_string(parts.train.size())});
  metrics += row_csv({"test_subjects", std::to_string(parts.test.size())});
  metrics += row_csv({"input_basis", std::to_string(model.input_dim)});
  metrics += row_csv({"output_basis", std::to_string(model.output_dim)});
  write_text(out_dir / "metrics.csv", metrics);
  std::string subjects = "subject,mean_gap,squared_error\n";
  for (const auto& s : eval.subjects) {
    subjects += row_csv({s.name, format_number(s.mean_gap), format_number(s.squared_error)});
  }
  write_text(out_dir / "evaluation.csv", subjects);

  std::cout << "trained " << to_string(config.learner.kind) << " on " << parts.train.size() << " subjects ("
            << model.input_dim << " -> " << model.output_dim << " coefficients); test mspe_function "
            << format_number(eval.mspe_function) << ", mspe_mean " << format_number(eval.mspe_mean) << '\n';
}

void run_predict(const PredictOptions& opt, const fs::path& out_dir) {
  const M2PModel model = read_m2p(opt.model);
  const FunctionSet inputs = read_function_set(opt.inputs);
  const std::vector<double> grid = opt.output_grid.empty() ? model.output_grid : parse_grid_spec(opt.output_grid);
  const Eigen::MatrixXd predicted = predict(model, inputs, grid);

  std::set<std::string> used;
  for (std::size_t i = 0; i < inputs.function_count(); ++i) {
    std::string text = "s,predicted\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      text += row_csv({format_number(grid[j]),
                       format_number(predicted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
    }
    write_text(out_dir / "predictions" / (safe_file_stem(inputs.names()[i], used) + ".csv"), text);
  }
  std::cout << "predicted " << inputs.function_count() << " curves on " << grid.size() << " points\n";
}

}  // namespace freeknot::cli
