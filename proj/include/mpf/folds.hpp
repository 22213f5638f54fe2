#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mpf {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> folds;  // sorted row indices per fold

  // Complement of fold f, sorted.
  std::vector<std::size_t> training_rows(std::size_t f) const;
};

// Per-class seeded shuffle then round-robin assignment. The minority class
// starts at fold 0 and the majority continues where it stopped, so fold sizes
// differ by at most one. Throws ContractError when n1 < k or when any fold
// would hold fewer than `min_minority_per_fold` minority rows.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed,
                          std::size_t min_minority_per_fold = 1);

}  // namespace mpf
