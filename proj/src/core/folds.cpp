#include "mpf/folds.hpp"

#include <algorithm>
#include <string>

#include "mpf/error.hpp"
#include "mpf/random.hpp"

namespace mpf {

std::vector<std::size_t> FoldPlan::training_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < folds.size(); ++g) {
    if (g != f) rows.insert(rows.end(), folds[g].begin(), folds[g].end());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed,
                          std::size_t min_minority_per_fold) {
  require(k >= 2, "stratified_kfold: k must be at least 2");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  if (pos.size() < k) {
    throw ContractError("stratified_kfold: only " + std::to_string(pos.size()) +
                        " minority rows for " + std::to_string(k) + " folds; use fewer folds");
  }
  if (pos.size() / k < min_minority_per_fold) {
    throw ContractError("stratified_kfold: folds would hold " + std::to_string(pos.size() / k) +
                        " minority rows, below the floor of " +
                        std::to_string(min_minority_per_fold));
  }
  Rng rng_pos(seed, 1);
  Rng rng_neg(seed, 0);
  rng_pos.shuffle(std::span<std::size_t>(pos));
  rng_neg.shuffle(std::span<std::size_t>(neg));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < pos.size(); ++i) plan.folds[i % k].push_back(pos[i]);
  const std::size_t offset = pos.size() % k;
  for (std::size_t i = 0; i < neg.size(); ++i) plan.folds[(offset + i) % k].push_back(neg[i]);
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

}  // namespace mpf
