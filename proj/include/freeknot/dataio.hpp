#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "freeknot/bspline.hpp"
#include "freeknot/knots.hpp"
#include "freeknot/m2p.hpp"
#include "freeknot/placement.hpp"
#include "freeknot/sampled.hpp"

namespace freeknot {

// Datasets are wide CSV files: a header row whose first cell is "t", then one
// row per grid point holding t followed by one value per function. Rows and
// columns in error messages are 1-based and count the header as row 1.

FunctionSet parse_function_set(std::string_view text);
FunctionSet read_function_set(const std::filesystem::path& path);
void write_function_set(const FunctionSet& set, const std::filesystem::path& path);

/// Shortest decimal form that parses back to exactly `value`.
std::string format_number(double value);

// Model documents are JSON objects {"format_version", "kind", "payload"} with
// kind one of "knots", "spline", "m2p".

inline constexpr int kModelFormatVersion = 1;

using ModelDocument = std::variant<KnotSequence, SplineModel, M2PModel>;

std::string_view document_kind(const ModelDocument& model);

std::string serialize_model(const ModelDocument& model);
ModelDocument parse_model(std::string_view text);

void write_model(const ModelDocument& model, const std::filesystem::path& path);
ModelDocument read_model(const std::filesystem::path& path);

/// Typed readers; a document of another kind raises FormatError.
KnotSequence read_knots(const std::filesystem::path& path);
SplineModel read_spline(const std::filesystem::path& path);
M2PModel read_m2p(const std::filesystem::path& path);

/// One line of a placement comparison sweep.
struct ComparisonRow {
  std::string method;
  int degree = 0;
  std::size_t knot_count = 0;
  std::optional<double> epsilon;
  double max_abs_error = 0.0;
  double rmse = 0.0;
  double gcv = 0.0;
};

/// Columns: method, degree, knot_count, epsilon, max_abs_error, rmse, gcv.
void write_report(std::span<const ComparisonRow> rows, const std::filesystem::path& path);

/// Columns: t, actual, fitted.
void write_fitted_curve(std::span<const double> grid, std::span<const double> actual,
                        std::span<const double> fitted, const std::filesystem::path& path);

/// Columns: index, knot (interior knots only).
void write_knot_list(const KnotSequence& knots, const std::filesystem::path& path);

/// Columns: span, lower, upper, length, max_envelope, bound, within_epsilon, forced.
/// `epsilon` absent writes "n/a" in within_epsilon.
void write_bound_report(const BoundReport& report, std::span<const std::size_t> forced_spans,
                        bool has_epsilon, const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories; throws DataError on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace freeknot
