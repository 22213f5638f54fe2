#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"

namespace mpf {

// One continuous feature. Class 1 is drawn from the same Gaussian with its
// mean moved by shift_weight * z_shift * sd. Draws are clamped to [lower, upper].
struct FeatureDistribution {
  std::string name;
  std::string unit;
  double mean = 0.0;
  double sd = 1.0;
  double shift_weight = 0.0;
  double lower = -1e300;
  double upper = 1e300;
};

struct CohortSpec {
  std::size_t n_total = 1687;
  double rho = 43.4;  // n0 / n1
  std::vector<FeatureDistribution> features = default_features();
  double z_shift = 3.0;
  double missingness = 0.0;
  std::uint64_t seed = 20240917;

  static std::vector<FeatureDistribution> default_features();
  void validate() const;
  // round(n_total / (rho + 1)).
  std::size_t minority_count() const;
};

struct PlantedTruth {
  CohortSpec spec;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::vector<std::string> names;
  std::vector<double> mean0;
  std::vector<double> mean1;
  std::vector<double> sd;
};

Dataset generate_cohort(const CohortSpec& spec);
PlantedTruth planted_truth(const CohortSpec& spec);

// Bayes error of the two-Gaussian, unit-variance, 1-D problem with class-1
// mean `shift` and class-1 prior `prior1`.
double bayes_error_1d(double shift, double prior1);

}  // namespace mpf
