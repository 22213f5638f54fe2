#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"
#include "mpf/fusion.hpp"
#include "mpf/interpretability.hpp"
#include "mpf/stats.hpp"

namespace mpf {

using ModelBuilder = std::function<FusionModel(const Dataset& train, const PipelineConfig&)>;

// How base outputs become a label: a weighted fusion or a majority vote.
struct FusionRule {
  std::string name;
  bool hard_vote = false;
  std::array<double, kClassifiers> alpha{};

  static FusionRule weighted(std::string name, double alpha_nb, double alpha_dt);
  static FusionRule vote(std::string name);
};

// mpf, nb_only, equal, dt_heavy, dt_only, hard_vote.
std::vector<FusionRule> default_ablation_roster();
// One of the default roster names; ConfigError otherwise.
FusionRule rule_from_name(const std::string& name, double alpha_nb = 0.8, double alpha_dt = 0.2);

int apply_rule(const FusionRule& rule, const ScoredSample& s, double tau, double epsilon);
// Fused probability, or the mean base probability for a vote.
double rule_probability(const FusionRule& rule, const ScoredSample& s, double epsilon);

std::map<std::string, double> default_clinical_importance();

struct InterpretabilitySettings {
  InterpretabilityWeights weights;
  double clinical = 0.75;
  std::map<std::string, double> clinical_importance = default_clinical_importance();
  std::size_t importance_repeats = 5;

  void validate() const;
};

// I_rule from the fitted tree, I_prob from the rule's probabilities on `data`,
// I_feature from permutation importance of the rule's labels on `data`.
InterpretabilityReport assess_interpretability(const FusionModel& model, const PreparedData& data,
                                               const FusionRule& rule, double tau,
                                               const InterpretabilitySettings& settings,
                                               std::uint64_t seed);

// Mean sensitivity per noise level. Noise is level * column sd (population,
// missing cells skipped) on continuous raw columns; stream (seed, l * repeats + r).
std::vector<double> noise_robustness(const FusionModel& model, const Dataset& raw,
                                     std::span<const double> levels, std::size_t repeats,
                                     std::uint64_t seed);

// Held-out base outputs of one fold.
struct ScoredFold {
  std::vector<std::size_t> rows;
  std::vector<int> truth;
  std::vector<ScoredSample> scored;
  FusionModel model;
  PreparedData prepared;
};

std::vector<ScoredFold> cross_validated_scores(const Dataset& ds, const PipelineConfig& config,
                                               std::size_t k, std::uint64_t seed,
                                               std::size_t min_minority_per_fold,
                                               const ModelBuilder& builder = fit_fusion);

std::vector<int> fold_predictions(const ScoredFold& fold, const FusionRule& rule, double tau,
                                  double epsilon);

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 for a single value
  std::vector<double> values;
};

MetricSummary summarize(std::vector<double> values);

struct Comparison {
  std::string name;
  std::string baseline;
  std::size_t b = 0;  // anomalies caught by `name` only
  std::size_t c = 0;  // anomalies caught by `baseline` only
  double delta_sensitivity = 0.0;
  TestResult mcnemar;
  TestResult permutation;
  bool holm_rejected = false;
  double holm_threshold = 0.0;
  std::optional<double> hedges_d;
};

struct EvaluationSettings {
  std::size_t outer_k = 5;
  std::size_t inner_k = 3;
  std::size_t repeats = 1;
  std::size_t min_minority_per_fold = 5;
  std::vector<double> tau_grid{0.2, 0.3, 0.4, 0.5};
  std::vector<double> curve_taus;  // empty means 0.05, 0.10, ..., 0.95
  std::size_t bootstrap_replicates = 10000;
  std::size_t permutation_iterations = 10000;
  double confidence = 0.95;
  double alpha = 0.05;
  CompositeWeights composite;
  std::string safety = "specificity";  // or "npv"
  InterpretabilitySettings interpretability;
  std::vector<double> noise_levels{0.0, 0.05, 0.10, 0.15, 0.20, 0.30};
  std::size_t noise_repeats = 5;
  double power_delta = 0.3;
  double power_sigma = 1.0;
  double sample_delta = 0.15;
  double sample_power = 0.8;
  double sample_p1 = 0.893;
  double sample_p2 = 0.743;
  double sample_rho = 0.3;
  double bound_delta = 0.05;
  double bound_c = 1.0;
  double bound_vc_dim = 0.0;  // 0 means model column count + 1
  double grid_step = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<double> curve() const;
};

struct FoldResult {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double tau = 0.0;
  std::vector<double> inner_scores;  // composite score per tau_grid entry
  std::array<double, kClassifiers> alpha{};
  ConfusionCounts counts;
  Rates rates;
  InterpretabilityReport interpretability;
  double composite = 0.0;
  std::vector<double> robustness;  // sensitivity per noise level, first repeat only
};

// Held-out record from the first repeat.
struct SampleRecord {
  std::size_t row = 0;
  std::size_t fold = 0;
  int truth = 0;
  double tau = 0.0;
  std::array<double, kClassifiers> alpha{};
  ScoredSample scored;
};

struct NestedCvResult {
  std::vector<FoldResult> folds;
  std::vector<SampleRecord> samples;  // sorted by row
};

// Outer stratified folds; inside each outer training set an inner CV picks tau
// from `tau_grid` by composite score (first maximum wins). All preprocessing
// is refitted by `builder` on training rows only.
NestedCvResult nested_cv(const Dataset& ds, const PipelineConfig& config,
                         const EvaluationSettings& settings,
                         const ModelBuilder& builder = fit_fusion);

struct WeightDiscrepancy {
  std::array<double, kClassifiers> sensitivity{};
  std::array<double, kClassifiers> specificity{};
  std::array<double, kClassifiers> interpretability{};
  std::array<double, kClassifiers> closed_form{};
  std::array<double, kClassifiers> grid{};
  double grid_step = 0.01;
  double loss_closed_form = 0.0;
  double loss_grid = 0.0;
  double gap = 0.0;
  double step_increment = 0.0;
  bool within_one_step = false;
  bool grid_at_vertex = false;
  std::string note;
};

WeightDiscrepancy weight_discrepancy(std::span<const double> sens, std::span<const double> spec,
                                     std::span<const double> interp, const CostModel& cost,
                                     double grid_step);

struct PowerSection {
  std::size_t n1 = 0;
  std::size_t n0 = 0;
  double delta = 0.0;
  double sigma = 1.0;
  double alpha = 0.05;
  PowerResult result;
  std::string note;
};

struct SampleSizeSection {
  double delta = 0.0;
  double alpha = 0.05;
  double power = 0.8;
  double p1 = 0.0;
  double p2 = 0.0;
  double rho = 0.0;
  SampleSize result;
  std::string note;
};

struct BoundSection {
  double empirical_risk = 0.0;
  std::size_t n1 = 0;
  std::size_t n = 0;
  std::size_t classifiers = kClassifiers;
  double delta = 0.05;
  double vc_dim = 0.0;
  double c = 1.0;
  BoundTerms terms;
};

struct CurvePoint {
  double tau = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

struct RobustnessPoint {
  double level = 0.0;
  double sensitivity = 0.0;
};

struct EvaluationReport {
  std::string schema = "mpf.evaluation/1";
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  std::string provenance;
  std::size_t n = 0;
  std::size_t n1 = 0;
  std::size_t n0 = 0;
  std::size_t outer_k = 0;
  std::size_t inner_k = 0;
  std::size_t repeats = 0;
  std::vector<FoldResult> folds;
  MetricSummary sensitivity;
  MetricSummary specificity;
  MetricSummary interpretability;
  InterpretabilityComponents interpretability_components;
  ConfusionCounts pooled;
  Rates pooled_rates;
  Interval sensitivity_exact;
  Interval specificity_exact;
  BcaResult sensitivity_bca;
  BcaResult specificity_bca;
  CompositeScore composite;
  Grade grade = Grade::D;
  std::vector<Comparison> comparisons;
  WeightDiscrepancy weights;
  PowerSection power;
  SampleSizeSection sample_size;
  BoundSection bound;
  std::vector<CurvePoint> threshold_curve;
  std::vector<RobustnessPoint> robustness;
  std::vector<std::string> notes;
};

EvaluationReport evaluate(const Dataset& ds, const PipelineConfig& config,
                          const EvaluationSettings& settings,
                          const ModelBuilder& builder = fit_fusion);

struct AblationSettings {
  std::size_t k = 5;
  std::size_t min_minority_per_fold = 5;
  std::vector<FusionRule> roster = default_ablation_roster();
  std::string baseline = "nb_only";
  std::size_t permutation_iterations = 10000;
  double alpha = 0.05;
  InterpretabilitySettings interpretability;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AblationRow {
  FusionRule rule;
  MetricSummary sensitivity;
  ConfusionCounts pooled;
  std::optional<double> specificity;
  double interpretability = 0.0;
};

struct AblationReport {
  std::string schema = "mpf.ablation/1";
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  double tau = 0.0;
  std::string baseline;
  double alpha = 0.05;
  std::vector<AblationRow> rows;
  std::vector<Comparison> comparisons;  // every roster entry except the baseline
};

// Every rule is scored on the same folds and the same fitted models.
AblationReport run_ablation(const Dataset& ds, const PipelineConfig& config,
                            const AblationSettings& settings,
                            const ModelBuilder& builder = fit_fusion);

}  // namespace mpf
