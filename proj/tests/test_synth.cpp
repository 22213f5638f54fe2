#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mpf/error.hpp"
#include "mpf/stats.hpp"
#include "mpf/synth.hpp"

using namespace mpf;

namespace {

// Mann-Whitney estimate of P(score of a positive > score of a negative).
double auc(const Dataset& ds, std::size_t col) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (ds.y[i] != 1) continue;
    for (std::size_t j = 0; j < ds.n(); ++j) {
      if (ds.y[j] != 0) continue;
      const double a = ds.x(i, col), b = ds.x(j, col);
      wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
      pairs += 1.0;
    }
  }
  return wins / pairs;
}

// Midpoint rule on the Bayes-optimal error integral, integrand min(p0 f0, p1 f1).
double bayes_error_numeric(double shift, double prior1) {
  const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); };
  const double lo = -12.0, hi = shift + 12.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (i + 0.5) * h;
    acc += std::min((1 - prior1) * phi(x), prior1 * phi(x - shift));
  }
  return acc * h;
}

}  // namespace

TEST_CASE("default cohort shape") {
  const CohortSpec spec;
  const auto ds = generate_cohort(spec);
  CHECK(ds.n() == 1687);
  CHECK(ds.count(1) == 38);
  CHECK(ds.count(0) == 1649);
  CHECK(ds.d() == spec.features.size());
  CHECK_FALSE(ds.has_missing());
  for (std::size_t j = 0; j < ds.d(); ++j) {
    for (std::size_t i = 0; i < ds.n(); ++i) {
      CHECK(ds.x(i, j) >= spec.features[j].lower);
      CHECK(ds.x(i, j) <= spec.features[j].upper);
    }
  }
  const auto truth = planted_truth(spec);
  CHECK(truth.n1 == 38);
  CHECK(truth.mean1[6] == 3.0);
  CHECK(truth.mean1[4] == 1.5);
}

TEST_CASE("class means land near the planted values") {
  CohortSpec spec;
  spec.n_total = 6000;
  spec.rho = 4.0;
  const auto ds = generate_cohort(spec);
  const auto truth = planted_truth(spec);
  for (std::size_t j = 0; j < ds.d(); ++j) {
    for (int c = 0; c < 2; ++c) {
      double sum = 0.0, n = 0.0;
      for (std::size_t i = 0; i < ds.n(); ++i) {
        if (ds.y[i] == c) {
          sum += ds.x(i, j);
          n += 1.0;
        }
      }
      const double planted = c == 0 ? truth.mean0[j] : truth.mean1[j];
      CHECK(std::abs(sum / n - planted) < 4.0 * truth.sd[j] / std::sqrt(n));
    }
  }
}

TEST_CASE("determinism and seeds") {
  CohortSpec spec;
  const auto a = generate_cohort(spec);
  const auto b = generate_cohort(spec);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  spec.seed += 1;
  CHECK_FALSE(generate_cohort(spec).x == a.x);
}

TEST_CASE("missingness") {
  CohortSpec spec;
  spec.missingness = 0.1;
  const auto ds = generate_cohort(spec);
  std::size_t missing = 0;
  for (double v : ds.x.data()) missing += std::isnan(v);
  const double rate = static_cast<double>(missing) / static_cast<double>(ds.x.data().size());
  CHECK(std::abs(rate - 0.1) < 4 * std::sqrt(0.1 * 0.9 / static_cast<double>(ds.x.data().size())));

  spec.missingness = 0.7;
  CHECK_THROWS_AS(generate_cohort(spec), ConfigError);
  spec.missingness = 0.0;
  spec.rho = 0.0;
  CHECK_THROWS_AS(generate_cohort(spec), ConfigError);
}

TEST_CASE("zero shift leaves classes indistinguishable") {
  CohortSpec spec;
  spec.n_total = 2000;
  spec.rho = 3.0;
  spec.z_shift = 0.0;
  const auto ds = generate_cohort(spec);
  const std::size_t z21 = ds.require_column("z21");
  // AUC standard error for 500 vs 1500 is about 0.015.
  CHECK(std::abs(auc(ds, z21) - 0.5) < 0.06);

  spec.z_shift = 3.0;
  CHECK(auc(generate_cohort(spec), z21) > 0.95);
}

TEST_CASE("Bayes error agrees with numerical integration") {
  for (double shift : {0.5, 1.0, 2.0, 3.0}) {
    for (double prior : {0.02, 0.1, 0.5}) {
      CHECK(bayes_error_1d(shift, prior) == doctest::Approx(bayes_error_numeric(shift, prior)).epsilon(1e-6));
    }
  }
  CHECK(bayes_error_1d(3.0, 0.5) == doctest::Approx(normal_cdf(-1.5)));
  CHECK_THROWS_AS(bayes_error_1d(0.0, 0.5), ContractError);
}
