#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"
#include "mpf/matrix.hpp"

namespace mpf {

struct IntervalConstraint {
  std::string column;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  // Signed-excess encoding: 0 inside [lower, upper], distance outside.
  double excess(double value) const;
};

struct ConstraintSet {
  std::vector<IntervalConstraint> constraints;
  double lambda = 1.0;

  void validate() const;
  bool empty() const noexcept { return constraints.empty(); }
};

// ConstraintSet with columns resolved to positions in a feature layout.
class BoundConstraints {
 public:
  BoundConstraints() = default;
  // Throws ContractError when a constrained column is not in `columns`.
  BoundConstraints(const ConstraintSet& set, const std::vector<std::string>& columns);

  bool feasible(std::span<const double> x) const;
  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return rules_.size(); }
  double excess(std::size_t i, std::span<const double> x) const;

 private:
  struct Rule {
    std::size_t column;
    IntervalConstraint interval;
  };
  std::vector<Rule> rules_;
  double lambda_ = 0.0;
};

bool is_feasible(std::span<const double> x, const std::vector<std::string>& columns,
                 const ConstraintSet& c);

// lambda * sum_i max(0, mean of g_i over the rows).
double violation_penalty(const Dataset& ds, const ConstraintSet& c);

inline constexpr double kBandwidthFloor = 1e-6;

// Training support and per-classifier bandwidths, all in standardized units.
struct ReliabilityParams {
  Matrix support;
  std::vector<double> bandwidth;
};

// Median nearest-other-neighbour distance, floored at kBandwidthFloor, shared
// by `classifiers` entries.
ReliabilityParams fit_reliability(const Matrix& standardized_train, std::size_t classifiers = 2);
ReliabilityParams fit_reliability(const Dataset& train, const ScalerParams& scaler,
                                  std::size_t classifiers = 2);

// exp(-d^2 / (2 sigma^2)) gated by feasibility.
double reliability(double distance, double bandwidth, bool feasible);
double reliability(std::span<const double> standardized_x, const ReliabilityParams& params,
                   std::size_t classifier, bool feasible);

}  // namespace mpf
