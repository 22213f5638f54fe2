#include "mpf/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "mpf/error.hpp"
#include "mpf/kernels.hpp"

namespace mpf {

double IntervalConstraint::excess(double value) const {
  if (std::isnan(value)) return std::numeric_limits<double>::infinity();
  return std::max({0.0, value - upper, lower - value});
}

void ConstraintSet::validate() const {
  if (!(lambda >= 0.0)) throw ConfigError("constraint lambda must be >= 0");
  for (const auto& c : constraints) {
    if (!(c.lower < c.upper)) {
      throw ConfigError("constraint on '" + c.column + "' needs lower < upper");
    }
  }
}

BoundConstraints::BoundConstraints(const ConstraintSet& set, const std::vector<std::string>& columns)
    : lambda_(set.lambda) {
  set.validate();
  for (const auto& c : set.constraints) {
    auto it = std::find(columns.begin(), columns.end(), c.column);
    if (it == columns.end()) {
      throw ContractError("constrained column '" + c.column + "' not present");
    }
    rules_.push_back({static_cast<std::size_t>(it - columns.begin()), c});
  }
}

double BoundConstraints::excess(std::size_t i, std::span<const double> x) const {
  const auto& rule = rules_[i];
  require(rule.column < x.size(), "feature vector shorter than constrained column index");
  return rule.interval.excess(x[rule.column]);
}

bool BoundConstraints::feasible(std::span<const double> x) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (excess(i, x) > 0.0) return false;
  }
  return true;
}

bool is_feasible(std::span<const double> x, const std::vector<std::string>& columns,
                 const ConstraintSet& c) {
  require(x.size() == columns.size(), "is_feasible: vector/column count mismatch");
  return BoundConstraints(c, columns).feasible(x);
}

double violation_penalty(const Dataset& ds, const ConstraintSet& c) {
  const BoundConstraints bound(c, ds.feature_names());
  if (ds.n() == 0 || bound.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < bound.size(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) sum += bound.excess(k, ds.x.row(i));
    total += std::max(0.0, sum / static_cast<double>(ds.n()));
  }
  return c.lambda * total;
}

ReliabilityParams fit_reliability(const Matrix& standardized_train, std::size_t classifiers) {
  if (standardized_train.rows() < 2) throw FitError("reliability fit needs at least two rows");
  require(classifiers >= 1, "fit_reliability: need at least one classifier");
  const auto nn = kernels::parallel::nearest_other_distances(standardized_train);
  const double sigma = std::max(median(nn), kBandwidthFloor);
  return {standardized_train, std::vector<double>(classifiers, sigma)};
}

ReliabilityParams fit_reliability(const Dataset& train, const ScalerParams& scaler,
                                  std::size_t classifiers) {
  return fit_reliability(standardize(train.x, scaler), classifiers);
}

double reliability(double distance, double bandwidth, bool feasible) {
  if (!feasible) return 0.0;
  return std::exp(-(distance * distance) / (2.0 * bandwidth * bandwidth));
}

double reliability(std::span<const double> standardized_x, const ReliabilityParams& params,
                   std::size_t classifier, bool feasible) {
  require(classifier < params.bandwidth.size(), "reliability: classifier index out of range");
  if (!feasible) return 0.0;
  Matrix q(1, standardized_x.size());
  std::copy(standardized_x.begin(), standardized_x.end(), q.row(0).begin());
  const double d = kernels::serial::nearest_distances(q, params.support)[0];
  return reliability(d, params.bandwidth[classifier], true);
}

}  // namespace mpf
