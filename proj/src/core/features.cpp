#include "mpf/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mpf/error.hpp"

namespace mpf {

namespace {

constexpr std::array<double, 4> kAgeBounds{25.0, 30.0, 35.0, 40.0};
constexpr std::array<double, 4> kBmiBounds{18.5, 25.0, 30.0, 35.0};

void check_bounds(std::span<const double> bounds, const char* what) {
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    if (!(bounds[i] > bounds[i - 1])) {
      throw ConfigError(std::string(what) + " boundaries must be strictly increasing");
    }
  }
}

}  // namespace

void EngineeringParams::validate() const {
  for (const auto& [id, ref] : reference) {
    if (!(ref.sd > 0.0)) throw ConfigError("reference sd for chromosome " + id + " must be > 0");
  }
  if (!composite_weights.empty()) {
    if (composite_weights.size() != chromosomes.size()) {
      throw ConfigError("composite_weights must have one entry per chromosome");
    }
    bool any_positive = false;
    for (double w : composite_weights) {
      if (w < 0.0) throw ConfigError("composite weights must be non-negative");
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw ConfigError("at least one composite weight must be positive");
  }
  check_bounds(age_bounds, "age");
  check_bounds(bmi_bounds, "bmi");
}

std::vector<double> EngineeringParams::weights() const {
  if (composite_weights.empty()) return std::vector<double>(chromosomes.size(), 1.0);
  return composite_weights;
}

double zscore(double concentration, double mean, double sd) {
  require(sd > 0.0, "zscore: sd must be positive");
  return (concentration - mean) / sd;
}

double composite_zscore(std::span<const double> z, std::span<const double> w) {
  require(z.size() == w.size(), "composite_zscore: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    require(w[i] >= 0.0, "composite_zscore: negative weight");
    acc += w[i] * z[i] * z[i];
  }
  return std::sqrt(acc);
}

int stratum(double value, std::span<const double> bounds) {
  const auto it = std::upper_bound(bounds.begin(), bounds.end(), value);
  return static_cast<int>(it - bounds.begin());
}

int age_stratum(double age) {
  require(age > 0.0 && age < 130.0, "age_stratum: age outside (0, 130)");
  return stratum(age, kAgeBounds);
}

int bmi_category(double bmi) {
  require(bmi > 5.0 && bmi < 100.0, "bmi_category: bmi outside (5, 100)");
  return stratum(bmi, kBmiBounds);
}

EngineeringParams fit_engineering(const Dataset& train, EngineeringParams params) {
  for (const auto& id : params.chromosomes) {
    if (params.reference.contains(id)) continue;
    auto raw = train.column_index("conc" + id);
    if (!raw) continue;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < train.n(); ++i) {
      const double v = train.x(i, *raw);
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    if (n < 2) throw FitError("not enough values to estimate reference for conc" + id);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < train.n(); ++i) {
      const double v = train.x(i, *raw);
      if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    params.reference[id] = {mean, std::max(std::sqrt(ss / static_cast<double>(n)), kScaleFloor)};
  }
  return params;
}

Dataset engineer(const Dataset& ds, const EngineeringParams& params) {
  params.validate();
  Dataset out = ds;
  const std::size_t n = ds.n();
  std::vector<std::size_t> z_columns;
  std::vector<std::size_t> raw_to_drop;

  for (const auto& id : params.chromosomes) {
    const std::string z_name = "z" + id;
    if (auto z = out.column_index(z_name)) {
      z_columns.push_back(*z);
      continue;
    }
    const std::string raw_name = "conc" + id;
    auto raw = out.column_index(raw_name);
    if (!raw) throw SchemaError("missing column '" + z_name + "' or '" + raw_name + "'");
    auto ref = params.reference.find(id);
    if (ref == params.reference.end()) {
      throw SchemaError("no reference statistics for chromosome " + id);
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = zscore(out.x(i, *raw), ref->second.mean, ref->second.sd);
    }
    out.append_feature({z_name, ColumnRole::continuous, "sd"}, values);
    z_columns.push_back(out.d() - 1);
    raw_to_drop.push_back(*raw);
  }

  const auto w = params.weights();
  const std::size_t age = out.require_column("age");
  const std::size_t bmi = out.require_column("bmi");
  std::vector<double> composite(n), age_code(n), bmi_code(n);
  std::vector<double> z(z_columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < z_columns.size(); ++k) z[k] = out.x(i, z_columns[k]);
    composite[i] = composite_zscore(z, w);
    const double a = out.x(i, age);
    const double b = out.x(i, bmi);
    require(a > 0.0 && a < 130.0, "engineer: age outside (0, 130) at row " + std::to_string(i + 1));
    require(b > 5.0 && b < 100.0, "engineer: bmi outside (5, 100) at row " + std::to_string(i + 1));
    age_code[i] = stratum(a, params.age_bounds);
    bmi_code[i] = stratum(b, params.bmi_bounds);
  }
  out.append_feature({"z_composite", ColumnRole::continuous, "sd"}, composite);
  out.append_feature({"age_stratum", ColumnRole::ordinal_stratum, ""}, age_code);
  out.append_feature({"bmi_category", ColumnRole::ordinal_stratum, ""}, bmi_code);

  if (params.drop_raw) {
    std::sort(raw_to_drop.rbegin(), raw_to_drop.rend());
    for (auto j : raw_to_drop) out.remove_feature(j);
  }
  return out;
}

}  // namespace mpf
