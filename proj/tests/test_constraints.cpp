#include <cmath>
#include <limits>

#include "doctest.h"
#include "mpf/constraints.hpp"
#include "mpf/error.hpp"
#include "mpf/random.hpp"

using namespace mpf;

namespace {

const std::vector<std::string> kCols{"gestational_week", "bmi"};

ConstraintSet clinical() {
  ConstraintSet c;
  c.constraints = {{"gestational_week", 10, 26}, {"bmi", 15, 45}};
  return c;
}

Dataset rows(const std::vector<std::vector<double>>& values) {
  Dataset ds;
  for (const auto& n : kCols) ds.features.push_back({n, ColumnRole::continuous, ""});
  ds.x = Matrix(0, kCols.size());
  for (const auto& r : values) {
    ds.x.append_row(r);
    ds.y.push_back(0);
  }
  return ds;
}

}  // namespace

TEST_CASE("feasibility") {
  const ConstraintSet none;
  CHECK(is_feasible(std::vector<double>{1e9, -1e9}, kCols, none));
  CHECK_FALSE(is_feasible(std::vector<double>{9, 30}, kCols, clinical()));
  CHECK(is_feasible(std::vector<double>{12, 30}, kCols, clinical()));
  CHECK(is_feasible(std::vector<double>{10, 45}, kCols, clinical()));
  CHECK_FALSE(is_feasible(std::vector<double>{std::nan(""), 30}, kCols, clinical()));

  ConstraintSet missing;
  missing.constraints = {{"age", 18, 50}};
  CHECK_THROWS_AS(is_feasible(std::vector<double>{12, 30}, kCols, missing), ContractError);

  ConstraintSet inverted;
  inverted.constraints = {{"bmi", 40, 20}};
  CHECK_THROWS_AS(inverted.validate(), ConfigError);
  inverted.constraints.clear();
  inverted.lambda = -1;
  CHECK_THROWS_AS(inverted.validate(), ConfigError);

  IntervalConstraint upper_only{"bmi", -std::numeric_limits<double>::infinity(), 40};
  CHECK(upper_only.excess(-1e300) == 0.0);
  CHECK(upper_only.excess(43) == 3.0);
}

TEST_CASE("violation penalty") {
  CHECK(violation_penalty(rows({{12, 22}, {20, 30}}), clinical()) == 0.0);

  ConstraintSet one;
  one.constraints = {{"bmi", 15, 45}};
  CHECK(violation_penalty(rows({{12, 47}}), one) == 2.0);
  one.lambda = 0.0;
  CHECK(violation_penalty(rows({{12, 47}}), one) == 0.0);

  // Hand evaluation: week excess mean (1 + 0)/2, bmi excess mean (0 + 5)/2.
  auto both = clinical();
  both.lambda = 2.0;
  CHECK(violation_penalty(rows({{9, 22}, {20, 50}}), both) == doctest::Approx(2.0 * (0.5 + 2.5)));

  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> v;
    for (int i = 0; i < 8; ++i) v.push_back({rng.normal(18, 10), rng.normal(30, 12)});
    CHECK(violation_penalty(rows(v), clinical()) >= 0.0);
  }
}

TEST_CASE("reliability bandwidth") {
  CHECK(fit_reliability(Matrix(2, 1, 0.0)).bandwidth[0] == kBandwidthFloor);

  Matrix pair(0, 2);
  pair.append_row(std::vector<double>{0, 0});
  pair.append_row(std::vector<double>{0.6, 0.8});
  CHECK(fit_reliability(pair).bandwidth == std::vector<double>{1.0, 1.0});

  Matrix grid(0, 1);
  for (double v : {0.0, 1.0, 2.0}) grid.append_row(std::vector<double>{v});
  CHECK(fit_reliability(grid, 3).bandwidth == std::vector<double>{1, 1, 1});

  Matrix dup(0, 2);
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> p{rng.normal(), rng.normal()};
    dup.append_row(p);
    dup.append_row(p);
  }
  CHECK(fit_reliability(dup).bandwidth[0] == kBandwidthFloor);

  CHECK_THROWS_AS(fit_reliability(Matrix(1, 2)), FitError);

  Dataset ds = rows({{10, 20}, {14, 20}, {18, 20}});
  ScalerParams scaler{{14, 20}, {4, 1}};
  const auto params = fit_reliability(ds, scaler);
  CHECK(params.bandwidth[0] == 1.0);
  CHECK(params.support(0, 0) == -1.0);
}

TEST_CASE("reliability values") {
  CHECK(reliability(0.0, 0.3, true) == 1.0);
  CHECK(reliability(0.0, 0.3, false) == 0.0);
  CHECK(reliability(2.0, 2.0, true) == doctest::Approx(std::exp(-0.5)));
  CHECK(reliability(2.0, 2.0, true) == doctest::Approx(0.6065).epsilon(1e-4));

  Matrix grid(0, 1);
  for (double v : {0.0, 1.0, 2.0}) grid.append_row(std::vector<double>{v});
  const auto params = fit_reliability(grid);
  CHECK(reliability(std::vector<double>{1.0}, params, 0, true) == 1.0);
  CHECK(reliability(std::vector<double>{3.0}, params, 1, true) == doctest::Approx(std::exp(-0.5)));
  CHECK(reliability(std::vector<double>{3.0}, params, 1, false) == 0.0);
  CHECK_THROWS_AS(reliability(std::vector<double>{3.0}, params, 2, true), ContractError);

  double prev = 1.0;
  for (double d = 0.0; d < 5.0; d += 0.05) {
    const double m = reliability(d, 0.7, true);
    CHECK(m <= prev);
    CHECK(m >= 0.0);
    prev = m;
  }
}
