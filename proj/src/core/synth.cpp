#include "mpf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpf/error.hpp"
#include "mpf/random.hpp"
#include "mpf/stats.hpp"

namespace mpf {

std::vector<FeatureDistribution> CohortSpec::default_features() {
  return {
      {"age", "years", 30.0, 4.5, 0.0, 16.0, 50.0},
      {"bmi", "kg/m2", 24.0, 4.0, 0.0, 14.0, 50.0},
      {"gestational_week", "weeks", 17.0, 3.0, 0.0, 8.0, 30.0},
      {"fetal_fraction", "fraction", 0.12, 0.04, 0.0, 0.01, 0.4},
      {"z13", "sd", 0.0, 1.0, 0.5},
      {"z18", "sd", 0.0, 1.0, 0.5},
      {"z21", "sd", 0.0, 1.0, 1.0},
  };
}

void CohortSpec::validate() const {
  if (!(rho > 0.0)) throw ConfigError("cohort rho must be > 0");
  if (!(missingness >= 0.0 && missingness <= 0.5)) throw ConfigError("cohort missingness must lie in [0, 0.5]");
  if (features.empty()) throw ConfigError("cohort needs at least one feature");
  for (const auto& f : features) {
    if (!(f.sd > 0.0)) throw ConfigError("cohort feature '" + f.name + "' needs sd > 0");
    if (!(f.lower < f.upper)) throw ConfigError("cohort feature '" + f.name + "' needs lower < upper");
  }
  if (n_total < 20) throw ConfigError("cohort n_total must be >= 20");
  if (minority_count() < 2) throw ConfigError("cohort implies fewer than two anomaly rows");
}

std::size_t CohortSpec::minority_count() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n_total) / (rho + 1.0)));
}

PlantedTruth planted_truth(const CohortSpec& spec) {
  PlantedTruth t;
  t.spec = spec;
  t.n1 = spec.minority_count();
  t.n0 = spec.n_total - t.n1;
  for (const auto& f : spec.features) {
    t.names.push_back(f.name);
    t.mean0.push_back(f.mean);
    t.mean1.push_back(f.mean + f.shift_weight * spec.z_shift * f.sd);
    t.sd.push_back(f.sd);
  }
  return t;
}

Dataset generate_cohort(const CohortSpec& spec) {
  spec.validate();
  const auto truth = planted_truth(spec);
  const std::size_t n = spec.n_total;
  const std::size_t d = spec.features.size();

  std::vector<int> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(truth.n1), 1);
  Rng order(spec.seed, 0);
  order.shuffle(std::span<int>(labels));

  Dataset ds;
  for (const auto& f : spec.features) ds.features.push_back({f.name, ColumnRole::continuous, f.unit});
  ds.x = Matrix(n, d);
  ds.y = labels;
  ds.provenance = "synthetic cohort seed=" + std::to_string(spec.seed);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(spec.seed, 1 + i);
    const auto& mean = labels[i] == 1 ? truth.mean1 : truth.mean0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto& f = spec.features[j];
      ds.x(i, j) = std::clamp(rng.normal(mean[j], f.sd), f.lower, f.upper);
    }
    if (spec.missingness > 0.0) {
      for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform() < spec.missingness) ds.x(i, j) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return ds;
}

double bayes_error_1d(double shift, double prior1) {
  require(shift > 0.0, "bayes_error_1d: shift must be positive");
  require(prior1 > 0.0 && prior1 < 1.0, "bayes_error_1d: prior must lie in (0, 1)");
  const double prior0 = 1.0 - prior1;
  // Decide class 1 when x > t, where the weighted densities cross.
  const double t = shift / 2.0 + std::log(prior0 / prior1) / shift;
  return prior0 * (1.0 - normal_cdf(t)) + prior1 * normal_cdf(t - shift);
}

}  // namespace mpf
