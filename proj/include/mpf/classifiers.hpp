#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpf/dataset.hpp"
#include "mpf/matrix.hpp"

namespace mpf {

// Posteriors are clamped to [kProbFloor, 1 - kProbFloor] so entropy-based
// scores never see 0 or 1.
inline constexpr double kProbFloor = 1e-12;
inline constexpr double kVarSmoothing = 1e-9;

// Gaussian Naive Bayes over every column.
struct NaiveBayesModel {
  std::array<double, 2> prior{};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;
  double smoothing = 0.0;  // absolute amount added to every variance

  std::size_t dims() const noexcept { return mean[0].size(); }
  double predict_proba(std::span<const double> x) const;
};

NaiveBayesModel fit_naive_bayes(const Matrix& x, std::span<const int> y);
NaiveBayesModel fit_naive_bayes(const Dataset& ds);

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  int depth = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeOptions {
  int max_depth = 5;
  std::size_t min_leaf = 5;
};

// CART tree on Gini impurity. Samples with x[feature] <= threshold go left.
// Nodes are stored in preorder; node 0 is the root.
struct DecisionTreeModel {
  std::vector<TreeNode> nodes;
  int max_depth = 5;
  std::size_t min_leaf = 5;
  std::size_t dims = 0;

  const TreeNode& leaf_for(std::span<const double> x) const;
  // Laplace-smoothed leaf proportion (n1 + 1) / (n0 + n1 + 2).
  double predict_proba(std::span<const double> x) const;
};

DecisionTreeModel fit_decision_tree(const Matrix& x, std::span<const int> y,
                                    TreeOptions options = {});
DecisionTreeModel fit_decision_tree(const Dataset& ds, TreeOptions options = {});

struct TreeStats {
  double avg_depth = 0.0;        // training-sample weighted leaf depth
  std::size_t n_conditions = 0;  // internal nodes
  int max_depth = 0;
  std::size_t max_conditions = 0;  // 2^max_depth - 1
};

TreeStats tree_stats(const DecisionTreeModel& model);

// Maps a feature matrix to 0/1 predictions.
using LabelPredictor = std::function<std::vector<int>(const Matrix&)>;

double sensitivity_of(std::span<const int> truth, std::span<const int> predicted);

// Mean drop in sensitivity when one column is shuffled; stream (seed, j * repeats + r).
std::vector<double> permutation_importance(const LabelPredictor& predict, const Matrix& x,
                                           std::span<const int> y, std::size_t repeats,
                                           std::uint64_t seed);
std::vector<double> permutation_importance(const NaiveBayesModel& model, const Dataset& ds,
                                           std::size_t repeats, std::uint64_t seed);
std::vector<double> permutation_importance(const DecisionTreeModel& model, const Dataset& ds,
                                           std::size_t repeats, std::uint64_t seed);

}  // namespace mpf
