#include <bit>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mpf/kernels.hpp"
#include "mpf/random.hpp"

using namespace mpf;
namespace k = mpf::kernels;

namespace {

Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

double brute_nearest(std::span<const double> q, const Matrix& s, std::size_t skip = SIZE_MAX) {
  double best = INFINITY;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    if (i == skip) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) acc += (q[j] - s(i, j)) * (q[j] - s(i, j));
    best = std::min(best, std::sqrt(acc));
  }
  return best;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("nearest distances match brute force") {
  const auto support = random_points(120, 4, 1);
  const auto query = random_points(60, 4, 2);
  const auto serial = k::serial::nearest_distances(query, support);
  const auto parallel = k::parallel::nearest_distances(query, support);
  for (std::size_t i = 0; i < query.rows(); ++i) {
    CHECK(serial[i] == doctest::Approx(brute_nearest(query.row(i), support)));
    CHECK(std::bit_cast<std::uint64_t>(serial[i]) == std::bit_cast<std::uint64_t>(parallel[i]));
  }

  const auto others = k::serial::nearest_other_distances(support);
  CHECK(k::parallel::nearest_other_distances(support) == others);
  for (std::size_t i = 0; i < support.rows(); ++i) {
    CHECK(others[i] == doctest::Approx(brute_nearest(support.row(i), support, i)));
  }
}

TEST_CASE("bootstrap replicates agree across execution modes") {
  Rng rng(5);
  std::vector<double> sample(80);
  for (auto& v : sample) v = rng.normal();
  const auto a = k::serial::bootstrap_replicates(sample, mean, 500, 3);
  const auto b = k::parallel::bootstrap_replicates(sample, mean, 500, 3);
  CHECK(a == b);
  CHECK(a.size() == 500);
  CHECK(k::serial::bootstrap_replicates(sample, mean, 500, 4) != a);
  const auto lo = *std::min_element(sample.begin(), sample.end());
  const auto hi = *std::max_element(sample.begin(), sample.end());
  for (double r : a) {
    CHECK(r >= lo);
    CHECK(r <= hi);
  }
}

TEST_CASE("sign-flip exceedances") {
  const std::vector<int> diffs{1, -1, 1, 1, 0, 1, -1, 1, 1, 1};
  const auto s = k::serial::sign_flip_exceedances(diffs, 4, 2000, 8);
  CHECK(k::parallel::sign_flip_exceedances(diffs, 4, 2000, 8) == s);
  CHECK(k::serial::sign_flip_exceedances(diffs, 0, 300, 8) == 300);
  CHECK(k::serial::sign_flip_exceedances(diffs, 100, 300, 8) == 0);

  // Nine nonzero entries: P(|sum| >= 4) = 2 * P(heads >= 7) for 9 fair coins = 2 * 46 / 512.
  const double expected = 2.0 * 46.0 / 512.0;
  const double observed = static_cast<double>(k::serial::sign_flip_exceedances(diffs, 4, 40000, 1)) / 40000.0;
  CHECK(std::abs(observed - expected) < 4 * std::sqrt(expected * (1 - expected) / 40000.0));
  CHECK(k::max_threads() >= 1);
}
