#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"

namespace mpf {

struct ReferenceStats {
  double mean = 0.0;
  double sd = 1.0;
};

// Chromosome reference statistics, composite weights and stratum boundaries.
// A chromosome id "21" maps to the raw column "conc21" and the z column "z21".
struct EngineeringParams {
  std::vector<std::string> chromosomes{"13", "18", "21"};
  std::map<std::string, ReferenceStats> reference;
  std::vector<double> composite_weights;  // empty means all ones
  std::vector<double> age_bounds{25.0, 30.0, 35.0, 40.0};
  std::vector<double> bmi_bounds{18.5, 25.0, 30.0, 35.0};
  bool drop_raw = true;

  void validate() const;
  std::vector<double> weights() const;
};

double zscore(double concentration, double mean, double sd);
double composite_zscore(std::span<const double> z, std::span<const double> w);

// Left-closed strata: value < bounds[0] -> 0, bounds[i-1] <= value < bounds[i] -> i.
int stratum(double value, std::span<const double> bounds);
int age_stratum(double age);
int bmi_category(double bmi);

// Fills missing reference stats from raw concentration columns of the
// training data (population moments).
EngineeringParams fit_engineering(const Dataset& train, EngineeringParams params);

// Appends z-scores for raw concentrations, z_composite, age_stratum and
// bmi_category.
Dataset engineer(const Dataset& ds, const EngineeringParams& params);

}  // namespace mpf
