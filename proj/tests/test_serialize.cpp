#include <bit>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "mpf/error.hpp"
#include "mpf/serialize.hpp"
#include "mpf/synth.hpp"
#include "mpf/validation.hpp"

using namespace mpf;

namespace {

Dataset cohort() {
  CohortSpec spec;
  spec.n_total = 400;
  spec.rho = 7.0;
  spec.missingness = 0.02;
  return generate_cohort(spec);
}

}  // namespace

TEST_CASE("model document round trip keeps predictions bit-identical") {
  const auto ds = cohort();
  PipelineConfig cfg;
  cfg.constraints.constraints = {{"gestational_week", 10, 26},
                                 {"bmi", 15, std::numeric_limits<double>::infinity()}};
  cfg.fusion.weight_mode = WeightMode::theorem2;
  const auto model = fit_fusion(ds, cfg);

  const std::string text = dump_json(model_document(model));
  CHECK(text.back() == '\n');
  const auto back = model_from_document(Json::parse(text));
  CHECK(dump_json(model_document(back)) == text);
  CHECK(std::isinf(back.constraints.constraints[1].upper));
  REQUIRE(back.weight_estimate.has_value());

  const auto a = predict_batch(model, model.prepare(ds));
  const auto b = predict_batch(back, back.prepare(ds));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    CHECK(std::bit_cast<std::uint64_t>(a[i].p) == std::bit_cast<std::uint64_t>(b[i].p));
    CHECK(a[i].label == b[i].label);
  }
}

TEST_CASE("model document errors") {
  auto doc = model_document(fit_fusion(cohort(), PipelineConfig{}));
  doc["schema"] = "mpf.model/0";
  CHECK_THROWS_AS(model_from_document(doc), ParseError);
  CHECK_THROWS_AS(model_from_document(Json::object()), ParseError);
}

TEST_CASE("interval constraints") {
  IntervalConstraint c{"bmi", -std::numeric_limits<double>::infinity(), 40};
  const Json j = c;
  CHECK(j["lower"].is_null());
  CHECK(j["upper"] == 40.0);
  const auto back = j.get<IntervalConstraint>();
  CHECK(std::isinf(back.lower));
  CHECK(back.lower < 0);
  CHECK(back.upper == 40.0);

  Json extra = j;
  extra["uper"] = 3;
  CHECK_THROWS_AS(extra.get<IntervalConstraint>(), ConfigError);
}

TEST_CASE("report round trips") {
  const auto ds = cohort();
  EvaluationSettings s;
  s.bootstrap_replicates = 1000;
  s.permutation_iterations = 1000;
  s.noise_levels = {0.0, 0.1};
  s.noise_repeats = 1;
  s.interpretability.importance_repeats = 1;
  const auto report = evaluate(ds, PipelineConfig{}, s);
  const std::string text = dump_json(Json(report));
  const auto back = Json::parse(text).get<EvaluationReport>();
  CHECK(dump_json(Json(back)) == text);
  CHECK(back.schema == "mpf.evaluation/1");
  CHECK(back.folds.size() == report.folds.size());

  AblationSettings as;
  as.permutation_iterations = 1000;
  as.interpretability.importance_repeats = 1;
  const auto abl = run_ablation(ds, PipelineConfig{}, as);
  const std::string atext = dump_json(Json(abl));
  CHECK(dump_json(Json(Json::parse(atext).get<AblationReport>())) == atext);
}

TEST_CASE("optional values serialize as null") {
  Rates r;
  const Json j = r;
  CHECK(j["sens"].is_null());
  const auto back = j.get<Rates>();
  CHECK_FALSE(back.sens.has_value());
  Rates full = metrics({25, 1, 10, 3});
  CHECK(*Json(full).get<Rates>().sens == *full.sens);
}
