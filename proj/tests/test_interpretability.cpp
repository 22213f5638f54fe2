#include <cmath>

#include "doctest.h"
#include "mpf/error.hpp"
#include "mpf/interpretability.hpp"
#include "mpf/random.hpp"

using namespace mpf;

using V = std::vector<double>;

TEST_CASE("rule transparency") {
  CHECK(rule_transparency({0.0, 0, 5, 31}) == 1.0);
  CHECK(rule_transparency({5.0, 31, 5, 31}) == 0.0);
  CHECK(rule_transparency({3.2, 7, 5, 31}) == doctest::Approx(1 - 0.64 * 7.0 / 31.0));
  CHECK(rule_transparency({3.2, 7, 5, 31}) == doctest::Approx(0.8555).epsilon(1e-4));
  CHECK(rule_transparency({0.0, 0, 0, 0}) == 1.0);

  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const int depth = 1 + static_cast<int>(rng.below(8));
    const std::size_t maxc = (std::size_t{1} << depth) - 1;
    const double r = rule_transparency({rng.uniform() * depth, rng.below(maxc + 1), depth, maxc});
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("probabilistic reasoning") {
  CHECK(probabilistic_reasoning(V{0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(probabilistic_reasoning(V{1e-12, 1 - 1e-12}) == doctest::Approx(1.0).epsilon(1e-9));
  // H2(0.9) = -(0.9 log2 0.9 + 0.1 log2 0.1)
  const double h = -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1));
  CHECK(probabilistic_reasoning(V{0.9, 0.9, 0.9}) == doctest::Approx(1 - h));
  CHECK(probabilistic_reasoning(V{0.9}) == doctest::Approx(0.5310).epsilon(1e-4));
  CHECK(binary_entropy(0.1) == doctest::Approx(binary_entropy(0.9)));
  CHECK_THROWS_AS(binary_entropy(0.0), ContractError);
  CHECK_THROWS_AS(binary_entropy(1.0), ContractError);
}

TEST_CASE("ranks and Spearman correlation") {
  CHECK(average_ranks(V{10, 30, 20}) == V{1, 3, 2});
  CHECK(average_ranks(V{5, 5, 1}) == V{2.5, 2.5, 1});
  CHECK(*spearman(V{1, 2, 3}, V{1, 3, 2}) == doctest::Approx(0.5));
  CHECK(feature_clarity(V{1, 2, 3}, V{1, 3, 2}) == doctest::Approx(0.5));
  CHECK(feature_clarity(V{0.1, 0.5, 0.9}, V{1, 2, 3}) == doctest::Approx(1.0));
  CHECK(feature_clarity(V{3, 2, 1}, V{1, 2, 3}) == 0.0);
  CHECK_FALSE(spearman(V{1, 1, 1}, V{1, 2, 3}).has_value());
  CHECK(feature_clarity(V{1, 1, 1}, V{1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(spearman(V{1, 2}, V{1, 2, 3}), ContractError);

  // Without ties Spearman equals 1 - 6 sum d^2 / (n (n^2 - 1)).
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.below(10);
    V a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const auto ra = average_ranks(a), rb = average_ranks(b);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double nn = static_cast<double>(n);
    CHECK(*spearman(a, b) == doctest::Approx(1 - 6 * d2 / (nn * (nn * nn - 1))));
    const double f = feature_clarity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("clinical integration and total") {
  CHECK(clinical_integration(0.75) == 0.75);
  CHECK(clinical_integration(0.5) == 0.5);
  CHECK_THROWS_AS(clinical_integration(1.2), ConfigError);

  const InterpretabilityWeights w;
  CHECK(interpretability_total({0.85, 0.78, 0.82, 0.75}, w).total == doctest::Approx(0.805));
  CHECK(interpretability_total({1, 1, 1, 1}, w).total == doctest::Approx(1.0));
  CHECK(interpretability_total({0, 0, 0, 0}, w).total == 0.0);

  InterpretabilityWeights bad;
  bad.rule = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const InterpretabilityComponents c{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    const double total = interpretability_total(c, w).total;
    CHECK(total >= 0.0);
    CHECK(total <= 1.0);
  }
}
