#pragma once

// JSON mappings for models, configuration sections and reports. Object keys
// are sorted, so a given value always dumps to the same bytes.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "json.hpp"
#include "mpf/classifiers.hpp"
#include "mpf/constraints.hpp"
#include "mpf/dataset.hpp"
#include "mpf/features.hpp"
#include "mpf/fusion.hpp"
#include "mpf/interpretability.hpp"
#include "mpf/stats.hpp"
#include "mpf/synth.hpp"
#include "mpf/validation.hpp"
#include "mpf/error.hpp"

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
  template <typename J>
  static void to_json(J& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  template <typename J>
  static void from_json(const J& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.template get<T>();
    }
  }
};
NLOHMANN_JSON_NAMESPACE_END

namespace mpf {

using Json = nlohmann::json;

inline constexpr const char* kModelSchema = "mpf.model/1";

NLOHMANN_JSON_SERIALIZE_ENUM(ColumnRole, {{ColumnRole::continuous, "continuous"},
                                          {ColumnRole::ordinal_stratum, "ordinal-stratum"},
                                          {ColumnRole::label, "label"},
                                          {ColumnRole::excluded, "excluded"}})
NLOHMANN_JSON_SERIALIZE_ENUM(WeightMode, {{WeightMode::fixed, "fixed"},
                                          {WeightMode::theorem2, "theorem2"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Grade, {{Grade::A, "A"}, {Grade::B, "B"}, {Grade::C, "C"},
                                     {Grade::D, "D"}})

template <typename J>
void to_json(J& j, const Matrix& m) {
  j = J{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

template <typename J>
void from_json(const J& j, Matrix& m) {
  const auto rows = j.at("rows").template get<std::size_t>();
  const auto cols = j.at("cols").template get<std::size_t>();
  const auto data = j.at("data").template get<std::vector<double>>();
  if (data.size() != rows * cols) throw ParseError("matrix data does not match its shape", 0);
  m = Matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  }
}

// Infinite bounds are written as null.
template <typename J>
void to_json(J& j, const IntervalConstraint& c) {
  j = J::object();
  j["column"] = c.column;
  j["lower"] = std::isinf(c.lower) ? J(nullptr) : J(c.lower);
  j["upper"] = std::isinf(c.upper) ? J(nullptr) : J(c.upper);
}

template <typename J>
void from_json(const J& j, IntervalConstraint& c) {
  for (const auto& [key, _] : j.items()) {
    if (key != "column" && key != "lower" && key != "upper") {
      throw ConfigError("unknown constraint key '" + key + "'");
    }
  }
  c.column = j.at("column").template get<std::string>();
  const auto lo = j.value("lower", J(nullptr));
  const auto hi = j.value("upper", J(nullptr));
  c.lower = lo.is_null() ? -std::numeric_limits<double>::infinity() : lo.template get<double>();
  c.upper = hi.is_null() ? std::numeric_limits<double>::infinity() : hi.template get<double>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ColumnSpec, name, role, unit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReferenceStats, mean, sd)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EngineeringParams, chromosomes, reference, composite_weights,
                                   age_bounds, bmi_bounds, drop_raw)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConstraintSet, constraints, lambda)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ImputerParams, medians)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScalerParams, mean, sd)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NaiveBayesModel, prior, mean, var, smoothing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TreeNode, feature, threshold, left, right, n0, n1, depth)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DecisionTreeModel, nodes, max_depth, min_leaf, dims)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReliabilityParams, support, bandwidth)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CostModel, c_fp, beta, gamma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TreeOptions, max_depth, min_leaf)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FusionConfig, alpha_nb, alpha_dt, tau, epsilon, cost,
                                   weight_mode, interp_nb, interp_dt, tree, bandwidth_nb,
                                   bandwidth_dt, inner_folds, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PipelineConfig, fusion, engineering, constraints)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WeightEstimate, sensitivity, interpretability, uniform_fallback)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FusionModel, input_columns, imputer, engineering, model_columns,
                                   scaler, nb, dt, reliability, constraints, config, alpha,
                                   weight_estimate, schema_fingerprint)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FeatureDistribution, name, unit, mean, sd, shift_weight, lower,
                                   upper)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CohortSpec, n_total, rho, features, z_shift, missingness, seed)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConfusionCounts, tp, fp, tn, fn)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Rates, sens, spec, ppv, npv, fpr, fnr)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Interval, lo, hi, method, degenerate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BcaResult, interval, observed, z0, acceleration)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TestResult, statistic, value, p_value, method, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SampleSize, n, unrounded, sigma_d2, sigma_d2_literal)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PowerResult, n_eff, power)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompositeWeights, sensitivity, interpretability, safety)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompositeScore, value, renormalized)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundTerms, empirical, minority, imbalance, constraint, total,
                                   rho)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InterpretabilityWeights, rule, prob, feature, clinical)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InterpretabilityComponents, rule, prob, feature, clinical)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InterpretabilityReport, components, total, feature_correlation,
                                   notes)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FusionRule, name, hard_vote, alpha)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InterpretabilitySettings, weights, clinical,
                                   clinical_importance, importance_repeats)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EvaluationSettings, outer_k, inner_k, repeats,
                                   min_minority_per_fold, tau_grid, curve_taus,
                                   bootstrap_replicates, permutation_iterations, confidence, alpha,
                                   composite, safety, interpretability, noise_levels,
                                   noise_repeats, power_delta, power_sigma, sample_delta,
                                   sample_power, sample_p1, sample_p2, sample_rho, bound_delta,
                                   bound_c, bound_vc_dim, grid_step, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MetricSummary, mean, sd, values)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Comparison, name, baseline, b, c, delta_sensitivity, mcnemar,
                                   permutation, holm_rejected, holm_threshold, hedges_d)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FoldResult, repeat, fold, tau, inner_scores, alpha, counts,
                                   rates, interpretability, composite, robustness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WeightDiscrepancy, sensitivity, specificity, interpretability,
                                   closed_form, grid, grid_step, loss_closed_form, loss_grid, gap,
                                   step_increment, within_one_step, grid_at_vertex, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PowerSection, n1, n0, delta, sigma, alpha, result, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SampleSizeSection, delta, alpha, power, p1, p2, rho, result,
                                   note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundSection, empirical_risk, n1, n, classifiers, delta, vc_dim,
                                   c, terms)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CurvePoint, tau, sensitivity, specificity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RobustnessPoint, level, sensitivity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EvaluationReport, schema, config_fingerprint, seed, provenance,
                                   n, n1, n0, outer_k, inner_k, repeats, folds, sensitivity,
                                   specificity, interpretability, interpretability_components,
                                   pooled, pooled_rates, sensitivity_exact, specificity_exact,
                                   sensitivity_bca, specificity_bca, composite, grade, comparisons,
                                   weights, power, sample_size, bound, threshold_curve, robustness,
                                   notes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AblationRow, rule, sensitivity, pooled, specificity,
                                   interpretability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AblationReport, schema, config_fingerprint, seed, k, tau,
                                   baseline, alpha, rows, comparisons)

// Two-space indent, trailing newline.
std::string dump_json(const Json& j);

// Model file: {"schema": kModelSchema, "model": {...}}. Throws ParseError on a
// schema mismatch.
Json model_document(const FusionModel& model);
FusionModel model_from_document(const Json& doc);

}  // namespace mpf
