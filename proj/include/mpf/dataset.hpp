#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/matrix.hpp"

namespace mpf {

enum class ColumnRole { continuous, ordinal_stratum, label, excluded };

std::string to_string(ColumnRole role);
ColumnRole column_role_from_string(const std::string& s);

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::continuous;
  std::string unit;

  bool operator==(const ColumnSpec&) const = default;
};

// Ordered column layout of a CSV file. Exactly one label column.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<ColumnSpec> columns);

  // Every header column becomes continuous except the named label, ordinal and
  // excluded columns.
  static FeatureSchema infer(const std::vector<std::string>& header,
                             const std::string& label,
                             const std::vector<std::string>& ordinal = {},
                             const std::vector<std::string>& excluded = {});

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  const ColumnSpec& label() const { return columns_[label_index_]; }
  const ColumnSpec* find(const std::string& name) const;

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t label_index_ = 0;
};

// Feature table with binary labels (0 = normal, 1 = anomaly). Missing cells are
// NaN until imputation.
struct Dataset {
  std::vector<ColumnSpec> features;
  std::string label_name = "label";
  Matrix x;
  std::vector<int> y;
  std::string provenance;

  std::size_t n() const noexcept { return x.rows(); }
  std::size_t d() const noexcept { return features.size(); }
  std::size_t count(int label) const;
  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> column_index(const std::string& name) const;
  // Throws SchemaError when absent.
  std::size_t require_column(const std::string& name) const;
  bool has_missing() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  void append_feature(ColumnSpec spec, std::span<const double> values);
  void remove_feature(std::size_t index);

  // Checks row/label counts and label values; throws ContractError.
  void validate() const;
};

Dataset parse_csv(std::istream& in, const FeatureSchema& schema,
                  const std::string& provenance = "stream");
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema);
// Header-only read, for schema inference.
std::vector<std::string> read_csv_header(const std::filesystem::path& path);

// Writes features then label. NaN cells are written as NA; doubles use the
// shortest representation that round-trips.
void write_csv(std::ostream& out, const Dataset& ds);

// Absent names are ignored, which makes the operation idempotent. Naming the
// label column is a ContractError.
Dataset drop_leakage_columns(const Dataset& ds, std::span<const std::string> names);

struct ImputerParams {
  std::vector<double> medians;
};

ImputerParams fit_imputer(const Dataset& train);
Dataset apply_imputer(const Dataset& ds, const ImputerParams& params);
Dataset impute_median(const Dataset& ds);

inline constexpr double kScaleFloor = 1e-12;

// Population (1/n) moments, sd floored at kScaleFloor.
struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> sd;
};

ScalerParams fit_standardizer(const Dataset& ds);
ScalerParams fit_standardizer(const Matrix& x);
Matrix standardize(const Matrix& x, const ScalerParams& params);
void standardize_row(std::span<const double> in, std::span<double> out,
                     const ScalerParams& params);
Dataset apply_standardizer(const Dataset& ds, const ScalerParams& params);
Dataset invert_standardizer(const Dataset& ds, const ScalerParams& params);

double median(std::vector<double> values);

}  // namespace mpf
