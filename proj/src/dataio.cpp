#include "freeknot/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "freeknot/errors.hpp"
#include "json.hpp"

namespace freeknot {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) {
      return cells;
    }
    start = comma + 1;
  }
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
  if (cell.empty()) {
    throw ParseError(row, column, "empty cell");
  }
  std::string_view digits = cell;
  if (digits.front() == '+') {
    digits.remove_prefix(1);
  }
  double value = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size()) {
    throw ParseError(row, column, "non-numeric value '" + std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(row, column, "non-finite value '" + std::string(cell) + "'");
  }
  return value;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// JSON encoding ------------------------------------------------------------

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) {
    throw FormatError(std::string(what) + " must be an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(std::string(what) + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) {
    throw FormatError(std::string(what) + " must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  }
  return v;
}

json knots_to_json(const KnotSequence& k) {
  return {{"degree", k.degree()},
          {"lower", k.lower()},
          {"upper", k.upper()},
          {"interior", std::vector<double>(k.interior().begin(), k.interior().end())}};
}

KnotSequence knots_from_json(const json& j) {
  return KnotSequence(j.at("degree").get<int>(), j.at("lower").get<double>(),
                      j.at("upper").get<double>(), j.at("interior").get<std::vector<double>>());
}

json placement_to_json(const PlacementConfig& p) {
  if (const auto* ilp = std::get_if<IlpPlacement>(&p)) {
    return {{"method", "ilp"}, {"epsilon", ilp->epsilon}, {"smoothing_window", ilp->smoothing_window}};
  }
  return {{"method", "equidistant"},
          {"interior_count", std::get<EquidistantPlacement>(p).interior_count}};
}

PlacementConfig placement_from_json(const json& j) {
  const auto method = j.at("method").get<std::string>();
  if (method == "ilp") {
    return IlpPlacement{j.at("epsilon").get<double>(), j.at("smoothing_window").get<int>()};
  }
  if (method == "equidistant") {
    return EquidistantPlacement{j.at("interior_count").get<std::size_t>()};
  }
  throw FormatError("unknown placement method '" + method + "'");
}

json learner_config_to_json(const LearnerConfig& c) {
  std::vector<std::string> activations;
  for (Activation a : c.feedforward.activations) {
    activations.emplace_back(to_string(a));
  }
  return {{"kind", std::string(to_string(c.kind))},
          {"ridge_lambda", c.ridge.lambda},
          {"hidden", c.feedforward.hidden},
          {"activations", activations},
          {"learning_rate", c.feedforward.learning_rate},
          {"epochs", c.feedforward.epochs},
          {"batch_size", c.feedforward.batch_size},
          {"patience", c.feedforward.patience},
          {"validation_split", c.feedforward.validation_split},
          {"seed", c.feedforward.seed}};
}

LearnerConfig learner_config_from_json(const json& j) {
  LearnerConfig c;
  c.kind = parse_learner_kind(j.at("kind").get<std::string>());
  c.ridge.lambda = j.at("ridge_lambda").get<double>();
  c.feedforward.hidden = j.at("hidden").get<std::vector<int>>();
  c.feedforward.activations.clear();
  for (const auto& a : j.at("activations")) {
    c.feedforward.activations.push_back(parse_activation(a.get<std::string>()));
  }
  c.feedforward.learning_rate = j.at("learning_rate").get<double>();
  c.feedforward.epochs = j.at("epochs").get<int>();
  c.feedforward.batch_size = j.at("batch_size").get<int>();
  c.feedforward.patience = j.at("patience").get<int>();
  c.feedforward.validation_split = j.at("validation_split").get<double>();
  c.feedforward.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json learner_to_json(const LearnerState& s) {
  json j = {{"kind", std::string(to_string(s.kind))},
            {"input_dim", s.input_dim},
            {"output_dim", s.output_dim}};
  if (s.kind == LearnerKind::ridge) {
    j["ridge_weights"] = matrix_to_json(s.ridge_weights);
  } else {
    json layers = json::array();
    for (const DenseLayer& layer : s.layers) {
      layers.push_back({{"activation", std::string(to_string(layer.activation))},
                        {"weights", matrix_to_json(layer.weights)},
                        {"bias", std::vector<double>(layer.bias.data(),
                                                     layer.bias.data() + layer.bias.size())}});
    }
    j["layers"] = std::move(layers);
  }
  return j;
}

LearnerState learner_from_json(const json& j, const LearnerConfig& config) {
  LearnerState s;
  s.kind = parse_learner_kind(j.at("kind").get<std::string>());
  s.config = config;
  s.input_dim = j.at("input_dim").get<int>();
  s.output_dim = j.at("output_dim").get<int>();
  if (s.kind == LearnerKind::ridge) {
    if (!j.contains("ridge_weights")) {
      throw FormatError("malformed m2p document: learner is missing ridge_weights");
    }
    s.ridge_weights = matrix_from_json(j.at("ridge_weights"), "ridge_weights");
    if (s.ridge_weights.rows() != s.input_dim + 1 || s.ridge_weights.cols() != s.output_dim) {
      throw FormatError("malformed m2p document: ridge_weights shape does not match dimensions");
    }
    if (!s.ridge_weights.allFinite()) {
      throw FormatError("malformed m2p document: ridge_weights are not finite");
    }
  } else {
    if (!j.contains("layers") || !j.at("layers").is_array() || j.at("layers").empty()) {
      throw FormatError("malformed m2p document: learner is missing layers");
    }
    for (const json& layer : j.at("layers")) {
      s.layers.push_back(DenseLayer{matrix_from_json(layer.at("weights"), "weights"),
                                    vector_from_json(layer.at("bias"), "bias"),
                                    parse_activation(layer.at("activation").get<std::string>())});
    }
    const FeedforwardNetwork net(s.layers);
    if (net.input_dim() != s.input_dim || net.output_dim() != s.output_dim) {
      throw FormatError("malformed m2p document: layer shapes do not match dimensions");
    }
  }
  return s;
}

json scaling_to_json(const AffineScaling& s) { return {{"lower", s.lower}, {"upper", s.upper}}; }

AffineScaling scaling_from_json(const json& j) {
  return AffineScaling{j.at("lower").get<double>(), j.at("upper").get<double>()};
}

json payload(const KnotSequence& k) { return knots_to_json(k); }

json payload(const SplineModel& s) {
  return {{"knots", knots_to_json(s.knots())}, {"coefficients", matrix_to_json(s.coefficients())}};
}

json payload(const M2PModel& m) {
  return {{"input_knots", knots_to_json(m.input_knots)},
          {"output_knots", knots_to_json(m.output_knots)},
          {"input_dim", m.input_dim},
          {"output_dim", m.output_dim},
          {"learner", learner_to_json(m.learner)},
          {"normalization",
           {{"input", scaling_to_json(m.input_scaling)}, {"output", scaling_to_json(m.output_scaling)}}},
          {"output_grid", m.output_grid},
          {"config",
           {{"input_degree", m.config.input_degree},
            {"output_degree", m.config.output_degree},
            {"input_placement", placement_to_json(m.config.input_placement)},
            {"output_placement", placement_to_json(m.config.output_placement)},
            {"normalize", m.config.normalize},
            {"learner", learner_config_to_json(m.config.learner)}}}};
}

M2PModel m2p_from_json(const json& p) {
  const json& cfg = p.at("config");
  M2PConfig config;
  config.input_degree = cfg.at("input_degree").get<int>();
  config.output_degree = cfg.at("output_degree").get<int>();
  config.input_placement = placement_from_json(cfg.at("input_placement"));
  config.output_placement = placement_from_json(cfg.at("output_placement"));
  config.normalize = cfg.at("normalize").get<bool>();
  config.learner = learner_config_from_json(cfg.at("learner"));

  if (!p.contains("learner")) {
    throw FormatError("malformed m2p document: missing learner");
  }
  M2PModel model{knots_from_json(p.at("input_knots")),
                 knots_from_json(p.at("output_knots")),
                 p.at("input_dim").get<int>(),
                 p.at("output_dim").get<int>(),
                 learner_from_json(p.at("learner"), config.learner),
                 scaling_from_json(p.at("normalization").at("input")),
                 scaling_from_json(p.at("normalization").at("output")),
                 p.at("output_grid").get<std::vector<double>>(),
                 config};
  if (static_cast<std::size_t>(model.input_dim) != model.input_knots.basis_count() ||
      static_cast<std::size_t>(model.output_dim) != model.output_knots.basis_count() ||
      model.learner.input_dim != model.input_dim || model.learner.output_dim != model.output_dim) {
    throw FormatError("malformed m2p document: dimensions disagree with the knot sequences");
  }
  return model;
}

ModelDocument decode(const json& doc) {
  if (!doc.is_object()) {
    throw FormatError("malformed document: top level must be an object");
  }
  if (!doc.contains("format_version") || !doc.at("format_version").is_number_integer()) {
    throw FormatError("malformed document: missing integer format_version");
  }
  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported format_version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  const auto kind = doc.at("kind").get<std::string>();
  const json& p = doc.at("payload");
  if (kind == "knots") {
    return knots_from_json(p);
  }
  if (kind == "spline") {
    return SplineModel(knots_from_json(p.at("knots")), matrix_from_json(p.at("coefficients"), "coefficients"));
  }
  if (kind == "m2p") {
    return m2p_from_json(p);
  }
  throw FormatError("unknown document kind '" + kind + "'");
}

template <typename T>
T read_kind(const std::filesystem::path& path, std::string_view expected) {
  ModelDocument doc = read_model(path);
  if (auto* value = std::get_if<T>(&doc)) {
    return std::move(*value);
  }
  throw FormatError(path.string() + " holds a '" + std::string(document_kind(doc)) +
                    "' document, expected '" + std::string(expected) + "'");
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& cell : cells) {
    if (!line.empty()) {
      line += ',';
    }
    line += cell;
  }
  line += '\n';
  return line;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

FunctionSet parse_function_set(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl == std::string_view::npos ? nl : nl - start));
    if (nl == std::string_view::npos) {
      break;
    }
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty()) {
    throw ParseError(1, 1, "file is empty; expected a header starting with 't'");
  }

  const auto header = split_cells(lines.front());
  if (header.front() != "t") {
    throw ParseError(1, 1, "first header cell must be 't', found '" + std::string(header.front()) + "'");
  }
  if (header.size() < 2) {
    throw ParseError(1, 2, "header names no function columns");
  }
  std::vector<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw ParseError(1, c + 1, "empty column name");
    }
    if (std::find(names.begin(), names.end(), header[c]) != names.end()) {
      throw ParseError(1, c + 1, "duplicate column name '" + std::string(header[c]) + "'");
    }
    names.emplace_back(header[c]);
  }
  if (lines.size() < 2) {
    throw ParseError(2, 1, "no data rows after the header");
  }

  const std::size_t width = header.size();
  const std::size_t rows = lines.size() - 1;
  std::vector<double> grid;
  grid.reserve(rows);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(width - 1), static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t file_row = r + 2;
    const auto cells = split_cells(lines[r + 1]);
    if (cells.size() != width) {
      throw ParseError(file_row, std::min(cells.size(), width) + 1,
                       "expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()));
    }
    const double t = parse_cell(cells[0], file_row, 1);
    if (!grid.empty() && !(t > grid.back())) {
      throw ParseError(file_row, 1,
                       "grid value " + std::string(cells[0]) + " is not greater than the previous value " +
                           format_number(grid.back()));
    }
    grid.push_back(t);
    for (std::size_t c = 1; c < width; ++c) {
      values(static_cast<Eigen::Index>(c - 1), static_cast<Eigen::Index>(r)) =
          parse_cell(cells[c], file_row, c + 1);
    }
  }
  return FunctionSet(std::move(grid), std::move(values), std::move(names));
}

FunctionSet read_function_set(const std::filesystem::path& path) {
  try {
    return parse_function_set(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(e.row(), e.column(),
                     path.string() + ": " +
                         std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

void write_function_set(const FunctionSet& set, const std::filesystem::path& path) {
  std::string out = "t";
  for (const auto& name : set.names()) {
    out += ',' + name;
  }
  out += '\n';
  for (std::size_t j = 0; j < set.sample_count(); ++j) {
    out += format_number(set.grid()[j]);
    for (std::size_t i = 0; i < set.function_count(); ++i) {
      out += ',' + format_number(set.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  write_text(path, out);
}

std::string_view document_kind(const ModelDocument& model) {
  static constexpr std::array<std::string_view, 3> kinds{"knots", "spline", "m2p"};
  return kinds[model.index()];
}

std::string serialize_model(const ModelDocument& model) {
  const json doc = {{"format_version", kModelFormatVersion},
                    {"kind", std::string(document_kind(model))},
                    {"payload", std::visit([](const auto& m) { return payload(m); }, model)}};
  return doc.dump(2) + "\n";
}

ModelDocument parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
  try {
    return decode(doc);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
}

void write_model(const ModelDocument& model, const std::filesystem::path& path) {
  write_text(path, serialize_model(model));
}

ModelDocument read_model(const std::filesystem::path& path) {
  try {
    return parse_model(read_text(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

KnotSequence read_knots(const std::filesystem::path& path) { return read_kind<KnotSequence>(path, "knots"); }
SplineModel read_spline(const std::filesystem::path& path) { return read_kind<SplineModel>(path, "spline"); }
M2PModel read_m2p(const std::filesystem::path& path) { return read_kind<M2PModel>(path, "m2p"); }

void write_report(std::span<const ComparisonRow> rows, const std::filesystem::path& path) {
  std::string out = "method,degree,knot_count,epsilon,max_abs_error,rmse,gcv\n";
  for (const ComparisonRow& row : rows) {
    out += csv_line({row.method, std::to_string(row.degree), std::to_string(row.knot_count),
                     row.epsilon ? format_number(*row.epsilon) : std::string(),
                     format_number(row.max_abs_error), format_number(row.rmse),
                     format_number(row.gcv)});
  }
  write_text(path, out);
}

void write_fitted_curve(std::span<const double> grid, std::span<const double> actual,
                        std::span<const double> fitted, const std::filesystem::path& path) {
  if (grid.size() != actual.size() || grid.size() != fitted.size()) {
    throw DataError("fitted curve columns have different lengths");
  }
  std::string out = "t,actual,fitted\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += csv_line({format_number(grid[j]), format_number(actual[j]), format_number(fitted[j])});
  }
  write_text(path, out);
}

void write_knot_list(const KnotSequence& knots, const std::filesystem::path& path) {
  std::string out = "index,knot\n";
  for (std::size_t k = 0; k < knots.interior().size(); ++k) {
    out += csv_line({std::to_string(k), format_number(knots.interior()[k])});
  }
  write_text(path, out);
}

void write_bound_report(const BoundReport& report, std::span<const std::size_t> forced_spans,
                        bool has_epsilon, const std::filesystem::path& path) {
  std::string out = "span,lower,upper,length,max_envelope,bound,within_epsilon,forced\n";
  for (std::size_t k = 0; k < report.spans.size(); ++k) {
    const SpanBound& s = report.spans[k];
    const bool forced = std::find(forced_spans.begin(), forced_spans.end(), k) != forced_spans.end();
    out += csv_line({std::to_string(k), format_number(s.lower), format_number(s.upper),
                     format_number(s.upper - s.lower), format_number(s.max_envelope),
                     format_number(s.bound),
                     has_epsilon ? (s.within ? "true" : "false") : "n/a",
                     forced ? "true" : "false"});
  }
  write_text(path, out);
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

}  // namespace freeknot
