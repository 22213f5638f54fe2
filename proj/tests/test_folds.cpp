#include <algorithm>
#include <set>

#include "doctest.h"
#include "mpf/error.hpp"
#include "mpf/folds.hpp"
#include "mpf/random.hpp"

using namespace mpf;

namespace {

std::vector<int> labels(std::size_t n0, std::size_t n1) {
  std::vector<int> y(n0, 0);
  y.insert(y.end(), n1, 1);
  return y;
}

}  // namespace

TEST_CASE("minority counts per fold") {
  const auto y = labels(1649, 38);
  const auto plan = stratified_kfold(y, 5, 20240917, 5);
  std::vector<std::size_t> minority;
  for (const auto& f : plan.folds) {
    minority.push_back(static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [&](auto i) { return y[i] == 1; })));
  }
  CHECK(minority == std::vector<std::size_t>{8, 8, 8, 7, 7});

  const auto tiny = stratified_kfold(std::vector<int>{0, 0, 1, 1}, 2, 1);
  for (const auto& f : tiny.folds) {
    REQUIRE(f.size() == 2);
    CHECK(std::count_if(f.begin(), f.end(), [](auto i) { return i >= 2; }) == 1);
  }
}

TEST_CASE("folds partition the rows") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + rng.below(6);
    const std::size_t n1 = k + rng.below(30);
    const std::size_t n0 = rng.below(200);
    std::vector<int> y = labels(n0, n1);
    rng.shuffle(std::span<int>(y));
    const auto plan = stratified_kfold(y, k, rng.next());
    std::vector<std::size_t> all;
    std::size_t lo = SIZE_MAX, hi = 0, lo1 = SIZE_MAX, hi1 = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const auto& fold = plan.folds[f];
      CHECK(std::is_sorted(fold.begin(), fold.end()));
      all.insert(all.end(), fold.begin(), fold.end());
      lo = std::min(lo, fold.size());
      hi = std::max(hi, fold.size());
      const auto ones = static_cast<std::size_t>(std::count_if(fold.begin(), fold.end(), [&](auto i) { return y[i] == 1; }));
      lo1 = std::min(lo1, ones);
      hi1 = std::max(hi1, ones);

      const auto train = plan.training_rows(f);
      CHECK(train.size() + fold.size() == y.size());
      std::vector<std::size_t> overlap;
      std::set_intersection(train.begin(), train.end(), fold.begin(), fold.end(), std::back_inserter(overlap));
      CHECK(overlap.empty());
    }
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(all.size() == y.size());
    CHECK(hi - lo <= 1);
    CHECK(hi1 - lo1 <= 1);
  }
}

TEST_CASE("fold errors and determinism") {
  const auto y = labels(100, 4);
  CHECK_THROWS_AS(stratified_kfold(y, 5, 1), ContractError);
  try {
    stratified_kfold(labels(100, 20), 5, 1, 5);
    FAIL("expected the minority floor to be violated");
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
  CHECK_THROWS_AS(stratified_kfold(y, 1, 1), ContractError);

  const auto big = labels(500, 40);
  CHECK(stratified_kfold(big, 5, 9).folds == stratified_kfold(big, 5, 9).folds);
  CHECK(stratified_kfold(big, 5, 9).folds != stratified_kfold(big, 5, 10).folds);
}
