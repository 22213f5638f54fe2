#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "mpf/classifiers.hpp"
#include "mpf/error.hpp"
#include "mpf/random.hpp"

using namespace mpf;

namespace {

Matrix column(const std::vector<double>& v) {
  Matrix m(0, 1);
  for (double x : v) m.append_row(std::vector<double>{x});
  return m;
}

// Separated 1-D example: class 0 at 1..5, class 1 at 10..14.
const std::vector<double> kSepX{1, 2, 3, 4, 5, 10, 11, 12, 13, 14};
const std::vector<int> kSepY{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};

double gini_sum(double a, double b) {
  const double n = a + b;
  return n == 0.0 ? 0.0 : n * (1.0 - (a / n) * (a / n) - (b / n) * (b / n));
}

// Lowest weighted child impurity over every midpoint split, or the parent
// impurity when no admissible split exists.
double brute_force_best(const std::vector<double>& x, const std::vector<int>& y, std::size_t min_leaf) {
  double n0 = 0, n1 = 0;
  for (int v : y) (v ? n1 : n0) += 1;
  double best = gini_sum(n0, n1);
  std::vector<double> values(x);
  std::sort(values.begin(), values.end());
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!(values[k] < values[k + 1])) continue;
    const double t = 0.5 * (values[k] + values[k + 1]);
    double l0 = 0, l1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] <= t) (y[i] ? l1 : l0) += 1;
    }
    const double nl = l0 + l1;
    if (nl < min_leaf || x.size() - nl < min_leaf) continue;
    best = std::min(best, gini_sum(l0, l1) + gini_sum(n0 - l0, n1 - l1));
  }
  return best;
}

}  // namespace

TEST_CASE("naive Bayes fit") {
  const auto x = column({0, 2, 10, 12});
  const std::vector<int> y{0, 0, 1, 1};
  const auto nb = fit_naive_bayes(x, y);
  CHECK(nb.mean[0][0] == 1.0);
  CHECK(nb.mean[1][0] == 11.0);
  CHECK(nb.prior[0] == 0.5);
  CHECK(nb.prior[1] == 0.5);
  CHECK(nb.var[0][0] == doctest::Approx(1.0));

  const auto sep = fit_naive_bayes(column(kSepX), kSepY);
  for (std::size_t i = 0; i < kSepX.size(); ++i) {
    const double p = sep.predict_proba(std::vector<double>{kSepX[i]});
    CHECK((p >= 0.5) == (kSepY[i] == 1));
  }

  // Direct Gaussian posterior, computed from the fitted moments.
  const double q = 13.0;
  auto density = [&](int c) {
    const double m = sep.mean[c][0], v = sep.var[c][0];
    return sep.prior[c] * std::exp(-(q - m) * (q - m) / (2 * v)) / std::sqrt(2 * std::numbers::pi * v);
  };
  const double expected = density(1) / (density(0) + density(1));
  CHECK(sep.predict_proba(std::vector<double>{q}) ==
        doctest::Approx(std::min(expected, 1.0 - kProbFloor)));
  CHECK(sep.predict_proba(std::vector<double>{q}) > 0.99);

  CHECK_THROWS_AS(sep.predict_proba(std::vector<double>{1, 2}), ContractError);
  CHECK_THROWS_AS(fit_naive_bayes(column({1, 2, 3, 4}), std::vector<int>{1, 1, 1, 1}), FitError);
}

TEST_CASE("naive Bayes with identical class-conditionals is uninformative") {
  const auto x = column({1, 3, 1, 3});
  const std::vector<int> y{0, 0, 1, 1};
  const auto nb = fit_naive_bayes(x, y);
  for (double v : {-10.0, 0.0, 2.0, 7.5}) {
    CHECK(nb.predict_proba(std::vector<double>{v}) == doctest::Approx(0.5));
  }
}

TEST_CASE("decision tree on the separated example") {
  const auto tree = fit_decision_tree(column(kSepX), kSepY);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == 7.5);
  CHECK(tree.nodes[1].n0 == 5);
  CHECK(tree.nodes[1].n1 == 0);
  CHECK(tree.nodes[2].n1 == 5);
  const auto s = tree_stats(tree);
  CHECK(s.avg_depth == 1.0);
  CHECK(s.n_conditions == 1);
  CHECK(s.max_conditions == 31);
  CHECK(tree.predict_proba(std::vector<double>{12}) == doctest::Approx(6.0 / 7.0));

  CHECK_THROWS_AS(fit_decision_tree(column(kSepX), std::vector<int>(10, 0)), FitError);
  CHECK_THROWS_AS(tree.predict_proba(std::vector<double>{1, 2}), ContractError);
}

TEST_CASE("decision tree leaf probability uses Laplace smoothing") {
  const auto x = column({0, 0, 0, 0, 0, 0, 0, 0, 1, 1});
  const std::vector<int> y{1, 1, 1, 1, 1, 1, 1, 1, 0, 0};
  const auto tree = fit_decision_tree(x, y, {.max_depth = 3, .min_leaf = 1});
  CHECK(tree.predict_proba(std::vector<double>{0}) == doctest::Approx(0.9));
  CHECK(tree.predict_proba(std::vector<double>{1}) == doctest::Approx(0.25));
}

TEST_CASE("max_depth 0 gives a single prior leaf") {
  const auto tree = fit_decision_tree(column(kSepX), kSepY, {.max_depth = 0, .min_leaf = 1});
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].is_leaf());
  CHECK(tree.predict_proba(std::vector<double>{100}) == 0.5);
  const auto s = tree_stats(tree);
  CHECK(s.avg_depth == 0.0);
  CHECK(s.n_conditions == 0);
}

TEST_CASE("root split matches a brute-force Gini scan") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 6 + rng.below(45);
    std::vector<double> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.below(20));
      y[i] = rng.uniform() < 0.35 ? 1 : 0;
    }
    y[0] = 0;
    y[1] = 1;
    const std::size_t min_leaf = 1 + rng.below(3);
    const auto tree = fit_decision_tree(column(x), y, {.max_depth = 1, .min_leaf = min_leaf});
    double achieved = 0.0;
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) achieved += gini_sum(static_cast<double>(node.n0), static_cast<double>(node.n1));
    }
    CHECK(achieved == doctest::Approx(brute_force_best(x, y, min_leaf)).epsilon(1e-9));
  }
}

TEST_CASE("tree invariants") {
  Rng rng(5);
  Matrix x(0, 3);
  std::vector<int> y;
  for (int i = 0; i < 300; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    x.append_row(std::vector<double>{a, b, c});
    y.push_back(a + 0.5 * b + 0.3 * rng.normal() > 0.8 ? 1 : 0);
  }
  const auto tree = fit_decision_tree(x, y, {.max_depth = 4, .min_leaf = 5});
  std::size_t leaf_total = 0;
  for (const auto& node : tree.nodes) {
    CHECK(node.depth <= 4);
    if (node.is_leaf()) {
      CHECK(node.n0 + node.n1 >= 5);
      leaf_total += node.n0 + node.n1;
    } else {
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      CHECK(l.n0 + r.n0 == node.n0);
      CHECK(l.n1 + r.n1 == node.n1);
    }
  }
  CHECK(leaf_total == 300);
  const auto s = tree_stats(tree);
  CHECK(s.avg_depth <= 4.0);
  CHECK(s.n_conditions <= s.max_conditions);

  const auto nb = fit_naive_bayes(x, y);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (double p : {nb.predict_proba(x.row(i)), tree.predict_proba(x.row(i))}) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  }
  CHECK(fit_decision_tree(x, y, {.max_depth = 4, .min_leaf = 5}).nodes == tree.nodes);
}

TEST_CASE("permutation importance") {
  Rng rng(8);
  Matrix x(0, 2);
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const int label = i % 3 == 0;
    x.append_row(std::vector<double>{label ? 10.0 + rng.uniform() : rng.uniform(), rng.normal()});
    y.push_back(label);
  }
  Dataset ds;
  ds.features = {{"signal", ColumnRole::continuous, ""}, {"noise", ColumnRole::continuous, ""}};
  ds.x = x;
  ds.y = y;
  const auto tree = fit_decision_tree(ds);
  const auto imp = permutation_importance(tree, ds, 10, 3);
  CHECK(imp[0] > 0.3);
  CHECK(imp[1] == 0.0);  // never used by the tree
  CHECK(permutation_importance(tree, ds, 10, 3) == imp);

  const auto nb = fit_naive_bayes(ds);
  const auto nb_imp = permutation_importance(nb, ds, 10, 3);
  CHECK(nb_imp[0] > 0.3);
  CHECK(std::abs(nb_imp[1]) < 0.1);
  CHECK_THROWS_AS(permutation_importance(tree, ds, 0, 3), ContractError);
}
