#include "mpf/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpf/error.hpp"
#include "mpf/fingerprint.hpp"
#include "mpf/folds.hpp"
#include "mpf/kernels.hpp"
#include "mpf/random.hpp"

namespace mpf {

std::string to_string(WeightMode mode) {
  return mode == WeightMode::fixed ? "fixed" : "theorem2";
}

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "fixed") return WeightMode::fixed;
  if (s == "theorem2") return WeightMode::theorem2;
  throw ConfigError("weight_mode must be 'fixed' or 'theorem2', got '" + s + "'");
}

void CostModel::validate() const {
  if (!(c_fp > 0.0)) throw ConfigError("c_fp must be > 0");
  if (!(beta >= 10.0)) throw ConfigError("beta must be >= 10");
  if (!(gamma >= 0.1 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0.1, 1]");
}

void FusionConfig::validate() const {
  if (!(alpha_nb >= 0.0 && alpha_dt >= 0.0)) throw ConfigError("fusion weights must be >= 0");
  if (std::abs(alpha_nb + alpha_dt - 1.0) > 1e-9) throw ConfigError("fusion weights must sum to 1");
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  cost.validate();
  if (!(interp_nb >= 0.0 && interp_nb <= 1.0 && interp_dt >= 0.0 && interp_dt <= 1.0)) {
    throw ConfigError("per-classifier interpretabilities must lie in [0, 1]");
  }
  if (tree.max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (tree.min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
  for (const auto& bw : {bandwidth_nb, bandwidth_dt}) {
    if (bw && !(*bw >= kBandwidthFloor)) throw ConfigError("bandwidth overrides must be >= 1e-6");
  }
  if (inner_folds < 2) throw ConfigError("inner_folds must be >= 2");
}

std::vector<std::string> FusionModel::model_column_names() const {
  std::vector<std::string> names;
  for (const auto& c : model_columns) names.push_back(c.name);
  return names;
}

PreparedData FusionModel::prepare(const Dataset& raw) const {
  if (raw.features.size() != input_columns.size()) {
    throw SchemaError("input has " + std::to_string(raw.features.size()) +
                      " columns, model expects " + std::to_string(input_columns.size()));
  }
  for (std::size_t j = 0; j < input_columns.size(); ++j) {
    if (raw.features[j].name != input_columns[j].name) {
      throw SchemaError("input column " + std::to_string(j) + " is '" + raw.features[j].name +
                        "', model expects '" + input_columns[j].name + "'");
    }
  }
  const Dataset engineered = engineer(apply_imputer(raw, imputer), engineering);
  PreparedData out;
  out.columns = engineered.features;
  out.engineered = engineered.x;
  out.standardized = standardize(engineered.x, scaler);
  out.y = raw.y;
  return out;
}

double fuse(std::span<const double> alpha, std::span<const double> p, std::span<const double> m,
            double epsilon, bool* fallback) {
  require(!alpha.empty() && alpha.size() == p.size() && p.size() == m.size(),
          "fuse: alpha, p and m must have equal non-zero length");
  double denom = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) denom += alpha[k] * m[k];
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (denom > epsilon) {
    if (fallback) *fallback = false;
    double out = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) out += (alpha[k] * m[k] / denom) * p[k];
    return std::clamp(out, *lo, *hi);
  }
  if (fallback) *fallback = true;
  double sum = 0.0;
  for (double v : p) sum += v;
  return sum / static_cast<double>(p.size());
}

FusionOutput decide(const ScoredSample& s, std::span<const double> alpha, double tau,
                    double epsilon) {
  FusionOutput out;
  out.p_k = s.p;
  out.m_k = s.m;
  out.p = fuse(alpha, s.p, s.m, epsilon, &out.fallback);
  out.label = out.p >= tau ? 1 : 0;
  return out;
}

int hard_vote(std::span<const double> p) {
  require(!p.empty(), "hard_vote: no votes");
  std::size_t ones = 0;
  for (double v : p) ones += v >= 0.5 ? 1 : 0;
  return 2 * ones >= p.size() ? 1 : 0;
}

namespace {

ScoredSample score_with_distance(const FusionModel& model, const BoundConstraints& bound,
                                 std::span<const double> engineered,
                                 std::span<const double> standardized, double distance) {
  ScoredSample s;
  s.p[kNaiveBayes] = model.nb.predict_proba(standardized);
  s.p[kDecisionTree] = model.dt.predict_proba(standardized);
  s.feasible = bound.feasible(engineered);
  for (std::size_t k = 0; k < kClassifiers; ++k) {
    s.m[k] = reliability(distance, model.reliability.bandwidth[k], s.feasible);
  }
  return s;
}

}  // namespace

ScoredSample score_prepared(const FusionModel& model, std::span<const double> engineered,
                            std::span<const double> standardized) {
  const BoundConstraints bound(model.constraints, model.model_column_names());
  Matrix q(1, standardized.size());
  std::copy(standardized.begin(), standardized.end(), q.row(0).begin());
  const double d = kernels::serial::nearest_distances(q, model.reliability.support)[0];
  return score_with_distance(model, bound, engineered, standardized, d);
}

std::vector<ScoredSample> score_batch(const FusionModel& model, const PreparedData& data,
                                      Execution exec) {
  const BoundConstraints bound(model.constraints, model.model_column_names());
  if (data.standardized.rows() == 0) return {};
  const auto dist = exec == Execution::parallel
                        ? kernels::parallel::nearest_distances(data.standardized, model.reliability.support)
                        : kernels::serial::nearest_distances(data.standardized, model.reliability.support);
  std::vector<ScoredSample> out(data.standardized.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = score_with_distance(model, bound, data.engineered.row(i), data.standardized.row(i), dist[i]);
  }
  return out;
}

std::vector<FusionOutput> predict_batch(const FusionModel& model, const PreparedData& data,
                                        Execution exec) {
  const auto scored = score_batch(model, data, exec);
  std::vector<FusionOutput> out;
  out.reserve(scored.size());
  for (const auto& s : scored) {
    out.push_back(decide(s, model.alpha, model.config.tau, model.config.epsilon));
  }
  return out;
}

namespace {

ScoredSample score_raw(std::span<const double> raw_x, const FusionModel& model) {
  require(raw_x.size() == model.input_columns.size(), "feature vector does not match the model schema");
  Dataset one;
  one.features = model.input_columns;
  one.x = Matrix(0, raw_x.size());
  one.x.append_row(raw_x);
  one.y = {0};
  const auto prepared = model.prepare(one);
  return score_prepared(model, prepared.engineered.row(0), prepared.standardized.row(0));
}

}  // namespace

double fuse_probability(std::span<const double> raw_x, const FusionModel& model) {
  const auto s = score_raw(raw_x, model);
  return fuse(model.alpha, s.p, s.m, model.config.epsilon);
}

FusionOutput predict(std::span<const double> raw_x, const FusionModel& model) {
  return decide(score_raw(raw_x, model), model.alpha, model.config.tau, model.config.epsilon);
}

int hard_vote(std::span<const double> raw_x, const FusionModel& model) {
  return hard_vote(score_raw(raw_x, model).p);
}

// ---------------------------------------------------------------------------
// Weights

std::vector<double> optimal_weights(std::span<const double> sens, std::span<const double> interp) {
  require(!sens.empty() && sens.size() == interp.size(), "optimal_weights: length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < sens.size(); ++k) {
    require(sens[k] >= 0.0 && sens[k] <= 1.0 && interp[k] >= 0.0 && interp[k] <= 1.0,
            "optimal_weights: inputs must lie in [0, 1]");
    total += sens[k] * interp[k];
  }
  if (!(total > 0.0)) throw DegenerateError("optimal_weights: every sens*interp product is zero");
  std::vector<double> alpha(sens.size());
  for (std::size_t k = 0; k < sens.size(); ++k) alpha[k] = sens[k] * interp[k] / total;
  return alpha;
}

double medical_loss(std::span<const double> alpha, std::span<const double> sens,
                    std::span<const double> spec, std::span<const double> interp,
                    const CostModel& cost) {
  const std::size_t k_count = alpha.size();
  require(sens.size() == k_count && spec.size() == k_count && interp.size() == k_count,
          "medical_loss: length mismatch");
  double miss = 0.0, false_alarm = 0.0, opacity = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    miss += alpha[k] * (1.0 - sens[k]);
    false_alarm += alpha[k] * (1.0 - spec[k]);
    opacity += alpha[k] * (1.0 - interp[k]);
  }
  return cost.c_fp * (cost.beta * miss + false_alarm + cost.gamma * opacity);
}

std::vector<double> brute_force_weights(std::span<const double> sens, std::span<const double> spec,
                                        std::span<const double> interp, const CostModel& cost,
                                        double grid_step) {
  require(sens.size() == 2, "brute_force_weights: grid scan supports two classifiers");
  require(grid_step > 0.0 && grid_step <= 0.5, "brute_force_weights: grid_step must lie in (0, 0.5]");
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(std::min(1.0, static_cast<double>(i) * grid_step));
  if (grid.back() < 1.0) grid.push_back(1.0);

  double best_loss = std::numeric_limits<double>::infinity();
  double best_a1 = 1.0;
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    const std::array<double, 2> a{*it, 1.0 - *it};
    const double loss = medical_loss(a, sens, spec, interp, cost);
    if (loss < best_loss) {
      best_loss = loss;
      best_a1 = *it;
    }
  }
  return {best_a1, 1.0 - best_a1};
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

FusionModel fit_components(const Dataset& train, const PipelineConfig& config) {
  train.validate();
  const std::size_t ones = train.count(1);
  if (ones == 0 || ones == train.n()) throw FitError("training data contains a single class");

  FusionModel model;
  model.config = config.fusion;
  model.constraints = config.constraints;
  model.input_columns = train.features;
  model.imputer = fit_imputer(train);
  const Dataset imputed = apply_imputer(train, model.imputer);
  model.engineering = fit_engineering(imputed, config.engineering);
  const Dataset engineered = engineer(imputed, model.engineering);
  model.model_columns = engineered.features;
  // Resolving here surfaces missing constrained columns at fit time.
  BoundConstraints(model.constraints, engineered.feature_names());

  model.scaler = fit_standardizer(engineered.x);
  const Matrix standardized = standardize(engineered.x, model.scaler);
  model.nb = fit_naive_bayes(standardized, engineered.y);
  model.dt = fit_decision_tree(standardized, engineered.y, config.fusion.tree);
  model.reliability = fit_reliability(standardized, kClassifiers);
  if (config.fusion.bandwidth_nb) model.reliability.bandwidth[kNaiveBayes] = *config.fusion.bandwidth_nb;
  if (config.fusion.bandwidth_dt) model.reliability.bandwidth[kDecisionTree] = *config.fusion.bandwidth_dt;

  std::string layout;
  for (const auto& c : model.input_columns) layout += c.name + ":" + to_string(c.role) + ";";
  layout += "|";
  for (const auto& c : model.model_columns) layout += c.name + ":" + to_string(c.role) + ";";
  model.schema_fingerprint = fingerprint(layout);
  model.alpha = {config.fusion.alpha_nb, config.fusion.alpha_dt};
  return model;
}

WeightEstimate estimate_weights(const Dataset& train, const PipelineConfig& config) {
  const auto& fc = config.fusion;
  const auto plan = stratified_kfold(train.y, fc.inner_folds, stream_seed(fc.seed, 0x7765));
  std::array<std::size_t, kClassifiers> hits{};
  std::size_t positives = 0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto rows = plan.training_rows(f);
    const FusionModel inner = fit_components(train.subset(rows), config);
    const auto prepared = inner.prepare(train.subset(plan.folds[f]));
    const auto scored = score_batch(inner, prepared);
    for (std::size_t i = 0; i < scored.size(); ++i) {
      if (prepared.y[i] != 1) continue;
      ++positives;
      for (std::size_t k = 0; k < kClassifiers; ++k) hits[k] += scored[i].p[k] >= fc.tau ? 1 : 0;
    }
  }
  WeightEstimate est;
  for (std::size_t k = 0; k < kClassifiers; ++k) {
    est.sensitivity[k] = static_cast<double>(hits[k]) / static_cast<double>(positives);
  }
  est.interpretability = {fc.interp_nb, fc.interp_dt};
  return est;
}

}  // namespace

FusionModel fit_fusion(const Dataset& train, const PipelineConfig& config) {
  config.fusion.validate();
  config.engineering.validate();
  config.constraints.validate();
  FusionModel model = fit_components(train, config);
  if (config.fusion.weight_mode == WeightMode::theorem2) {
    WeightEstimate est = estimate_weights(train, config);
    try {
      const auto a = optimal_weights(est.sensitivity, est.interpretability);
      model.alpha = {a[0], a[1]};
    } catch (const DegenerateError&) {
      model.alpha = {0.5, 0.5};
      est.uniform_fallback = true;
    }
    model.weight_estimate = est;
  }
  return model;
}

}  // namespace mpf
