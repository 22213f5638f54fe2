#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "mpf/error.hpp"
#include "mpf/serialize.hpp"
#include "mpf/synth.hpp"
#include "mpf/validation.hpp"

using namespace mpf;

namespace {

Dataset cohort(std::uint64_t seed = 5) {
  CohortSpec spec;
  spec.n_total = 600;
  spec.rho = 9.0;
  spec.seed = seed;
  return generate_cohort(spec);
}

EvaluationSettings quick_settings() {
  EvaluationSettings s;
  s.bootstrap_replicates = 1000;
  s.permutation_iterations = 1000;
  s.noise_levels = {0.0, 0.2};
  s.noise_repeats = 2;
  s.interpretability.importance_repeats = 2;
  s.seed = 77;
  return s;
}

// z21 is an unclamped Gaussian draw, so its value identifies a row.
std::map<double, std::size_t> row_index(const Dataset& ds) {
  std::map<double, std::size_t> out;
  const std::size_t col = ds.require_column("z21");
  for (std::size_t i = 0; i < ds.n(); ++i) out.emplace(ds.x(i, col), i);
  return out;
}

}  // namespace

TEST_CASE("nested CV structure") {
  const auto ds = cohort();
  const auto settings = quick_settings();
  const auto res = nested_cv(ds, PipelineConfig{}, settings);
  REQUIRE(res.folds.size() == 5);
  CHECK(res.samples.size() == ds.n());
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    CHECK(res.samples[i].row == i);
    CHECK(res.samples[i].truth == ds.y[i]);
  }
  for (const auto& f : res.folds) {
    CHECK(std::find(settings.tau_grid.begin(), settings.tau_grid.end(), f.tau) != settings.tau_grid.end());
    CHECK(f.inner_scores.size() == settings.tau_grid.size());
    // First maximum wins.
    const auto best = std::max_element(f.inner_scores.begin(), f.inner_scores.end());
    CHECK(f.tau == settings.tau_grid[static_cast<std::size_t>(best - f.inner_scores.begin())]);
    CHECK(f.robustness.size() == 2);
    CHECK(f.counts.tp + f.counts.fn >= 5);
  }
}

TEST_CASE("no held-out row reaches a builder") {
  const auto ds = cohort();
  const auto ids = row_index(ds);
  REQUIRE(ids.size() == ds.n());
  std::vector<std::set<std::size_t>> seen;
  const ModelBuilder spy = [&](const Dataset& train, const PipelineConfig& cfg) {
    std::set<std::size_t> rows;
    const std::size_t col = train.require_column("z21");
    for (std::size_t i = 0; i < train.n(); ++i) rows.insert(ids.at(train.x(i, col)));
    seen.push_back(std::move(rows));
    return fit_fusion(train, cfg);
  };
  auto settings = quick_settings();
  settings.noise_levels.clear();
  const auto res = nested_cv(ds, PipelineConfig{}, settings, spy);
  CHECK(seen.size() == settings.outer_k * (settings.inner_k + 1));

  std::vector<std::set<std::size_t>> held_out(settings.outer_k);
  for (const auto& s : res.samples) held_out[s.fold].insert(s.row);
  for (const auto& rows : seen) {
    std::size_t disjoint_from = 0;
    for (const auto& fold : held_out) {
      if (std::none_of(fold.begin(), fold.end(), [&](std::size_t r) { return rows.count(r) > 0; })) {
        ++disjoint_from;
      }
    }
    CHECK(disjoint_from == 1);
  }
  // Every outer fit sees exactly the complement of its test fold.
  for (std::size_t f = 0; f < settings.outer_k; ++f) {
    const auto& outer_rows = seen[f * (settings.inner_k + 1) + settings.inner_k];
    CHECK(outer_rows.size() + held_out[f].size() == ds.n());
  }
}

TEST_CASE("evaluation is deterministic") {
  const auto ds = cohort();
  const auto settings = quick_settings();
  const auto a = evaluate(ds, PipelineConfig{}, settings);
  const auto b = evaluate(ds, PipelineConfig{}, settings);
  CHECK(dump_json(Json(a)) == dump_json(Json(b)));
  CHECK(a.folds.size() == 5);
  CHECK(a.sensitivity.values.size() == 5);
  CHECK(a.comparisons.size() == 2);
  CHECK(a.robustness.size() == 2);
  CHECK(a.threshold_curve.size() == 19);
  CHECK(a.pooled.tp + a.pooled.fn == ds.count(1));
  CHECK(a.sensitivity_exact.lo <= *a.pooled_rates.sens);
  CHECK(a.sensitivity_exact.hi >= *a.pooled_rates.sens);

  auto other = settings;
  other.seed += 1;
  CHECK(dump_json(Json(evaluate(ds, PipelineConfig{}, other))) != dump_json(Json(a)));
}

TEST_CASE("noise level zero reproduces clean predictions") {
  const auto ds = cohort();
  const auto model = fit_fusion(ds, PipelineConfig{});
  const auto out = predict_batch(model, model.prepare(ds));
  std::vector<int> pred;
  for (const auto& o : out) pred.push_back(o.label);
  const double clean = sensitivity_of(ds.y, pred);
  const std::vector<double> levels{0.0, 0.1, 1.0};
  const auto r = noise_robustness(model, ds, levels, 3, 9);
  CHECK(r[0] == clean);
  CHECK(r[2] < clean);
  CHECK(noise_robustness(model, ds, levels, 3, 9) == r);
}

TEST_CASE("weight discrepancy bookkeeping") {
  const std::vector<double> sens{0.893, 0.136}, spec{0.99, 0.995}, interp{0.65, 0.85};
  const auto w = weight_discrepancy(sens, spec, interp, CostModel{}, 0.01);
  CHECK(w.closed_form[0] == doctest::Approx(0.834).epsilon(1e-3));
  CHECK(w.grid[0] + w.grid[1] == doctest::Approx(1.0));
  CHECK(w.loss_grid <= w.loss_closed_form + 1e-12);
  CHECK(w.gap == doctest::Approx(w.loss_closed_form - w.loss_grid));
  CHECK(w.within_one_step == (w.gap <= w.step_increment + 1e-12));
  CHECK(w.grid_at_vertex);
  CHECK(w.loss_closed_form ==
        doctest::Approx(medical_loss(w.closed_form, sens, spec, interp, CostModel{})));
}

TEST_CASE("ablation on shared folds") {
  const auto ds = cohort();
  AblationSettings s;
  s.permutation_iterations = 1000;
  s.interpretability.importance_repeats = 2;
  s.seed = 3;
  const auto rep = run_ablation(ds, PipelineConfig{}, s);
  REQUIRE(rep.rows.size() == 6);
  CHECK(rep.comparisons.size() == 5);
  for (const auto& c : rep.comparisons) {
    CHECK(c.baseline == "nb_only");
    CHECK(c.name != "nb_only");
  }
  std::vector<double> p;
  for (const auto& c : rep.comparisons) p.push_back(c.mcnemar.p_value);
  const auto holm = holm_correction(p, s.alpha);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(rep.comparisons[i].holm_rejected == holm.rejected[i]);
    if (rep.comparisons[i].holm_rejected) CHECK(p[i] <= rep.comparisons[i].holm_threshold);
  }
  for (const auto& row : rep.rows) {
    CHECK(row.sensitivity.values.size() == 5);
    CHECK(row.pooled.tp + row.pooled.fn == ds.count(1));
  }

  // A rule identical to the baseline disagrees nowhere.
  s.roster = {rule_from_name("nb_only"), FusionRule::weighted("nb_copy", 1.0, 0.0)};
  const auto twin = run_ablation(ds, PipelineConfig{}, s);
  REQUIRE(twin.comparisons.size() == 1);
  CHECK(twin.comparisons[0].b == 0);
  CHECK(twin.comparisons[0].c == 0);
  CHECK(twin.comparisons[0].mcnemar.p_value == 1.0);
  CHECK(twin.comparisons[0].delta_sensitivity == 0.0);
}

TEST_CASE("rules and settings") {
  CHECK(rule_from_name("mpf").alpha == std::array<double, 2>{0.8, 0.2});
  CHECK(rule_from_name("hard_vote").hard_vote);
  CHECK_THROWS_AS(rule_from_name("bogus"), ConfigError);
  CHECK(default_ablation_roster().size() == 6);

  ScoredSample s;
  s.p = {0.9, 0.1};
  s.m = {1, 1};
  CHECK(apply_rule(rule_from_name("hard_vote"), s, 0.3, 1e-8) == 1);
  CHECK(rule_probability(rule_from_name("hard_vote"), s, 1e-8) == doctest::Approx(0.5));
  CHECK(rule_probability(rule_from_name("mpf"), s, 1e-8) == doctest::Approx(0.74));

  const auto m = summarize({1.0, 2.0, 3.0});
  CHECK(m.mean == 2.0);
  CHECK(m.sd == 1.0);
  CHECK(summarize({4.0}).sd == 0.0);

  EvaluationSettings bad;
  bad.tau_grid = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.safety = "ppv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(EvaluationSettings{}.curve().size() == 19);
}
