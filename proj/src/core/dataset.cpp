#include "mpf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mpf/error.hpp"

namespace mpf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

std::optional<double> parse_double(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::continuous: return "continuous";
    case ColumnRole::ordinal_stratum: return "ordinal-stratum";
    case ColumnRole::label: return "label";
    case ColumnRole::excluded: return "excluded";
  }
  return "unknown";
}

ColumnRole column_role_from_string(const std::string& s) {
  if (s == "continuous") return ColumnRole::continuous;
  if (s == "ordinal-stratum") return ColumnRole::ordinal_stratum;
  if (s == "label") return ColumnRole::label;
  if (s == "excluded") return ColumnRole::excluded;
  throw SchemaError("unknown column role '" + s + "'");
}

FeatureSchema::FeatureSchema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::set<std::string> seen;
  std::size_t labels = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!seen.insert(columns_[i].name).second) {
      throw SchemaError("duplicate column '" + columns_[i].name + "'");
    }
    if (columns_[i].role == ColumnRole::label) {
      ++labels;
      label_index_ = i;
    }
  }
  if (labels != 1) throw SchemaError("schema must have exactly one label column");
}

FeatureSchema FeatureSchema::infer(const std::vector<std::string>& header,
                                   const std::string& label,
                                   const std::vector<std::string>& ordinal,
                                   const std::vector<std::string>& excluded) {
  auto contains = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::vector<ColumnSpec> cols;
  for (const auto& name : header) {
    ColumnSpec spec{name, ColumnRole::continuous, ""};
    if (name == label) spec.role = ColumnRole::label;
    else if (contains(excluded, name)) spec.role = ColumnRole::excluded;
    else if (contains(ordinal, name)) spec.role = ColumnRole::ordinal_stratum;
    cols.push_back(spec);
  }
  if (!contains(header, label)) throw SchemaError("label column '" + label + "' not in header");
  return FeatureSchema(std::move(cols));
}

const ColumnSpec* FeatureSchema::find(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::size_t Dataset::count(int label) const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features.size());
  for (const auto& f : features) names.push_back(f.name);
  return names;
}

std::optional<std::size_t> Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].name == name) return j;
  }
  return std::nullopt;
}

std::size_t Dataset::require_column(const std::string& name) const {
  auto idx = column_index(name);
  if (!idx) throw SchemaError("missing column '" + name + "'");
  return *idx;
}

bool Dataset::has_missing() const {
  return std::any_of(x.data().begin(), x.data().end(), [](double v) { return std::isnan(v); });
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features;
  out.label_name = label_name;
  out.provenance = provenance;
  out.x = x.select_rows(rows);
  out.y.reserve(rows.size());
  for (auto r : rows) out.y.push_back(y[r]);
  return out;
}

void Dataset::append_feature(ColumnSpec spec, std::span<const double> values) {
  if (column_index(spec.name)) throw SchemaError("column '" + spec.name + "' already present");
  if (x.cols() == 0 && x.rows() == 0) {
    x = Matrix(values.size(), 0);
  }
  x.append_column(values);
  features.push_back(std::move(spec));
}

void Dataset::remove_feature(std::size_t index) {
  x.erase_column(index);
  features.erase(features.begin() + static_cast<std::ptrdiff_t>(index));
}

void Dataset::validate() const {
  require(x.rows() == y.size(), "dataset: row count differs from label count");
  require(x.cols() == features.size() || x.rows() == 0, "dataset: width differs from schema");
  for (int v : y) require(v == 0 || v == 1, "dataset: label values must be 0 or 1");
}

std::vector<std::string> read_csv_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EmptyInputError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw EmptyInputError("'" + path.string() + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto cells = split_line(line);
  for (auto& c : cells) c = trim(c);
  return cells;
}

Dataset parse_csv(std::istream& in, const FeatureSchema& schema, const std::string& provenance) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw EmptyInputError("empty input: no header row in " + provenance);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_line(line);
  for (auto& h : header) h = trim(h);

  // Map schema columns onto header positions.
  Dataset ds;
  ds.provenance = provenance;
  ds.label_name = schema.label().name;
  std::vector<std::size_t> feature_pos;
  std::size_t label_pos = 0;
  for (const auto& col : schema.columns()) {
    auto it = std::find(header.begin(), header.end(), col.name);
    if (it == header.end()) {
      if (col.role == ColumnRole::excluded) continue;
      throw SchemaError("missing column '" + col.name + "' in " + provenance);
    }
    const auto pos = static_cast<std::size_t>(it - header.begin());
    if (col.role == ColumnRole::label) {
      label_pos = pos;
    } else if (col.role != ColumnRole::excluded) {
      feature_pos.push_back(pos);
      ds.features.push_back(col);
    }
  }
  ds.x = Matrix(0, ds.features.size());

  std::size_t row = 0;
  std::vector<double> values(ds.features.size());
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                           std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       row);
    }
    for (std::size_t j = 0; j < feature_pos.size(); ++j) {
      const std::string cell = trim(cells[feature_pos[j]]);
      if (is_missing(cell)) {
        values[j] = kNaN;
        continue;
      }
      auto v = parse_double(cell);
      if (!v) {
        throw ParseError("row " + std::to_string(row) + ": non-numeric value '" + cell +
                             "' in column '" + ds.features[j].name + "'",
                         row);
      }
      values[j] = *v;
    }
    const std::string label = trim(cells[label_pos]);
    if (label != "0" && label != "1") {
      throw ParseError("row " + std::to_string(row) + ": label must be 0 or 1, found '" +
                           label + "'",
                       row);
    }
    ds.x.append_row(values);
    ds.y.push_back(label == "1" ? 1 : 0);
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw EmptyInputError("cannot open '" + path.string() + "'");
  return parse_csv(in, schema, path.string());
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& f : ds.features) out << f.name << ',';
  out << ds.label_name << '\n';
  char buf[64];
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.d(); ++j) {
      const double v = ds.x(i, j);
      if (std::isnan(v)) {
        out << "NA";
      } else {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, ptr - buf);
      }
      out << ',';
    }
    out << ds.y[i] << '\n';
  }
}

Dataset drop_leakage_columns(const Dataset& ds, std::span<const std::string> names) {
  Dataset out = ds;
  for (const auto& name : names) {
    if (name == ds.label_name) {
      throw ContractError("cannot drop the label column '" + name + "'");
    }
    if (auto idx = out.column_index(name)) out.remove_feature(*idx);
  }
  return out;
}

double median(std::vector<double> values) {
  require(!values.empty(), "median of empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ImputerParams fit_imputer(const Dataset& train) {
  ImputerParams params;
  params.medians.resize(train.d());
  for (std::size_t j = 0; j < train.d(); ++j) {
    std::vector<double> present;
    for (std::size_t i = 0; i < train.n(); ++i) {
      if (!std::isnan(train.x(i, j))) present.push_back(train.x(i, j));
    }
    if (present.empty()) {
      throw FitError("column '" + train.features[j].name + "' has no observed values");
    }
    params.medians[j] = median(std::move(present));
  }
  return params;
}

Dataset apply_imputer(const Dataset& ds, const ImputerParams& params) {
  require(params.medians.size() == ds.d(), "imputer width differs from dataset");
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n(); ++i) {
    for (std::size_t j = 0; j < out.d(); ++j) {
      if (std::isnan(out.x(i, j))) out.x(i, j) = params.medians[j];
    }
  }
  return out;
}

Dataset impute_median(const Dataset& ds) { return apply_imputer(ds, fit_imputer(ds)); }

ScalerParams fit_standardizer(const Matrix& x) {
  require(x.rows() >= 2, "fit_standardizer needs at least two rows");
  const auto n = static_cast<double>(x.rows());
  ScalerParams p;
  p.mean.assign(x.cols(), 0.0);
  p.sd.assign(x.cols(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sum += x(i, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    p.mean[j] = mean;
    p.sd[j] = std::max(std::sqrt(ss / n), kScaleFloor);
  }
  return p;
}

ScalerParams fit_standardizer(const Dataset& ds) { return fit_standardizer(ds.x); }

void standardize_row(std::span<const double> in, std::span<double> out, const ScalerParams& p) {
  require(in.size() == p.mean.size() && out.size() == in.size(), "standardize_row: width mismatch");
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - p.mean[j]) / p.sd[j];
}

Matrix standardize(const Matrix& x, const ScalerParams& p) {
  require(x.cols() == p.mean.size() || x.rows() == 0, "standardize: width mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) standardize_row(x.row(i), out.row(i), p);
  return out;
}

Dataset apply_standardizer(const Dataset& ds, const ScalerParams& p) {
  Dataset out = ds;
  out.x = standardize(ds.x, p);
  return out;
}

Dataset invert_standardizer(const Dataset& ds, const ScalerParams& p) {
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n(); ++i) {
    for (std::size_t j = 0; j < out.d(); ++j) out.x(i, j) = ds.x(i, j) * p.sd[j] + p.mean[j];
  }
  return out;
}

}  // namespace mpf
