#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/classifiers.hpp"
#include "mpf/constraints.hpp"
#include "mpf/dataset.hpp"
#include "mpf/features.hpp"
#include "mpf/kernels.hpp"

namespace mpf {

// Base classifier slots. Fusion arithmetic is written for any K; the shipped
// pipeline fits exactly these two.
enum Classifier : std::size_t { kNaiveBayes = 0, kDecisionTree = 1 };
inline constexpr std::size_t kClassifiers = 2;

enum class WeightMode { fixed, theorem2 };
std::string to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& s);

// Miss-rate cost multiplier beta and interpretability weight gamma, both in
// units of the false-positive cost.
struct CostModel {
  double c_fp = 1.0;
  double beta = 10.0;
  double gamma = 0.5;

  void validate() const;
};

struct FusionConfig {
  double alpha_nb = 0.8;
  double alpha_dt = 0.2;
  double tau = 0.3;
  double epsilon = 1e-8;
  CostModel cost;
  WeightMode weight_mode = WeightMode::fixed;
  // Headline per-classifier interpretabilities used by the closed-form weights.
  double interp_nb = 0.65;
  double interp_dt = 0.85;
  TreeOptions tree;
  std::optional<double> bandwidth_nb;
  std::optional<double> bandwidth_dt;
  std::size_t inner_folds = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PipelineConfig {
  FusionConfig fusion;
  EngineeringParams engineering;
  ConstraintSet constraints;
};

// Inner-CV evidence behind theorem2 weights.
struct WeightEstimate {
  std::array<double, kClassifiers> sensitivity{};
  std::array<double, kClassifiers> interpretability{};
  bool uniform_fallback = false;
};

// Model inputs after imputation and engineering (clinical units) and after
// standardization.
struct PreparedData {
  std::vector<ColumnSpec> columns;
  Matrix engineered;
  Matrix standardized;
  std::vector<int> y;
};

struct FusionModel {
  std::vector<ColumnSpec> input_columns;
  ImputerParams imputer;
  EngineeringParams engineering;
  std::vector<ColumnSpec> model_columns;
  ScalerParams scaler;
  NaiveBayesModel nb;
  DecisionTreeModel dt;
  ReliabilityParams reliability;
  ConstraintSet constraints;
  FusionConfig config;
  std::array<double, kClassifiers> alpha{};
  std::optional<WeightEstimate> weight_estimate;
  std::string schema_fingerprint;

  std::vector<std::string> model_column_names() const;
  PreparedData prepare(const Dataset& raw) const;
};

// Per-sample base outputs, before weights are applied.
struct ScoredSample {
  std::array<double, kClassifiers> p{};
  std::array<double, kClassifiers> m{};
  bool feasible = true;
};

struct FusionOutput {
  int label = 0;
  double p = 0.0;
  std::array<double, kClassifiers> p_k{};
  std::array<double, kClassifiers> m_k{};
  bool fallback = false;
};

// Reliability-weighted fusion: sum_k w_k p_k with w_k = alpha_k M_k / sum_j alpha_j M_j
// when sum_j alpha_j M_j > epsilon, else the plain mean of p. The weighted
// result is clamped to [min p, max p].
double fuse(std::span<const double> alpha, std::span<const double> p,
            std::span<const double> m, double epsilon, bool* fallback = nullptr);

FusionOutput decide(const ScoredSample& s, std::span<const double> alpha, double tau,
                    double epsilon);
// Majority of votes 1{p_k >= 0.5}; ties go to the anomaly class.
int hard_vote(std::span<const double> p);

ScoredSample score_prepared(const FusionModel& model, std::span<const double> engineered,
                            std::span<const double> standardized);
std::vector<ScoredSample> score_batch(const FusionModel& model, const PreparedData& data,
                                      Execution exec = Execution::parallel);
std::vector<FusionOutput> predict_batch(const FusionModel& model, const PreparedData& data,
                                        Execution exec = Execution::parallel);

// Single raw row in the model's input column order.
double fuse_probability(std::span<const double> raw_x, const FusionModel& model);
FusionOutput predict(std::span<const double> raw_x, const FusionModel& model);
int hard_vote(std::span<const double> raw_x, const FusionModel& model);

// alpha_k = sens_k I_k / sum_j sens_j I_j. Throws DegenerateError when every
// product is zero.
std::vector<double> optimal_weights(std::span<const double> sens, std::span<const double> interp);

double medical_loss(std::span<const double> alpha, std::span<const double> sens,
                    std::span<const double> spec, std::span<const double> interp,
                    const CostModel& cost);

// Exhaustive scan of the two-classifier simplex at `grid_step`; ties keep the
// larger alpha_1.
std::vector<double> brute_force_weights(std::span<const double> sens,
                                        std::span<const double> spec,
                                        std::span<const double> interp, const CostModel& cost,
                                        double grid_step);

FusionModel fit_fusion(const Dataset& train, const PipelineConfig& config);

}  // namespace mpf
