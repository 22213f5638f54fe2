#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/classifiers.hpp"

namespace mpf {

struct InterpretabilityWeights {
  double rule = 0.3;
  double prob = 0.25;
  double feature = 0.25;
  double clinical = 0.2;

  void validate() const;
};

struct InterpretabilityComponents {
  double rule = 0.0;
  double prob = 0.0;
  double feature = 0.0;
  double clinical = 0.0;
};

struct InterpretabilityReport {
  InterpretabilityComponents components;
  double total = 0.0;
  std::optional<double> feature_correlation;  // raw Spearman r behind I_feature
  std::vector<std::string> notes;
};

// 1 - (avg_depth / max_depth) * (n_conditions / max_conditions), clamped to [0, 1].
double rule_transparency(const TreeStats& stats);

// Base-2 binary entropy; p must lie strictly inside (0, 1).
double binary_entropy(double p);
// 1 - mean binary entropy.
double probabilistic_reasoning(std::span<const double> probs);

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);
// nullopt when either vector has zero variance.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);
// max(0, Spearman r); 0 when undefined.
double feature_clarity(std::span<const double> model_importance,
                       std::span<const double> clinical_importance);

// Configured clinical-integration constant; ConfigError outside [0, 1].
double clinical_integration(double configured);

InterpretabilityReport interpretability_total(const InterpretabilityComponents& c,
                                              const InterpretabilityWeights& w);

}  // namespace mpf
