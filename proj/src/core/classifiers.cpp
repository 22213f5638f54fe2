#include "mpf/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mpf/error.hpp"
#include "mpf/random.hpp"

namespace mpf {

namespace {

void check_binary_training(const Matrix& x, std::span<const int> y) {
  require(x.rows() == y.size(), "training rows differ from label count");
  std::size_t ones = 0;
  for (int v : y) {
    require(v == 0 || v == 1, "labels must be 0 or 1");
    ones += static_cast<std::size_t>(v);
  }
  if (ones == 0 || ones == y.size()) throw FitError("training data contains a single class");
}

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

}  // namespace

// ---------------------------------------------------------------------------
// Naive Bayes

NaiveBayesModel fit_naive_bayes(const Matrix& x, std::span<const int> y) {
  check_binary_training(x, y);
  if (x.rows() < 4) throw FitError("naive Bayes needs at least four rows");
  const std::size_t d = x.cols();
  NaiveBayesModel m;
  std::array<std::size_t, 2> counts{};
  for (int c = 0; c < 2; ++c) {
    m.mean[c].assign(d, 0.0);
    m.var[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int c = y[i];
    ++counts[c];
    for (std::size_t j = 0; j < d; ++j) m.mean[c][j] += x(i, j);
  }
  for (int c = 0; c < 2; ++c) {
    for (auto& v : m.mean[c]) v /= static_cast<double>(counts[c]);
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int c = y[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x(i, j) - m.mean[c][j];
      m.var[c][j] += diff * diff;
    }
  }

  // Smoothing scales with the largest whole-sample feature variance.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= static_cast<double>(x.rows());
    double ss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    max_var = std::max(max_var, ss / static_cast<double>(x.rows()));
  }
  m.smoothing = kVarSmoothing * (max_var > 0.0 ? max_var : 1.0);
  for (int c = 0; c < 2; ++c) {
    for (auto& v : m.var[c]) v = v / static_cast<double>(counts[c]) + m.smoothing;
  }
  const auto n = static_cast<double>(x.rows());
  m.prior = {static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n};
  return m;
}

NaiveBayesModel fit_naive_bayes(const Dataset& ds) { return fit_naive_bayes(ds.x, ds.y); }

double NaiveBayesModel::predict_proba(std::span<const double> x) const {
  require(x.size() == dims(), "naive Bayes: feature dimension mismatch");
  std::array<double, 2> log_joint{};
  for (int c = 0; c < 2; ++c) {
    double acc = std::log(prior[c]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - mean[c][j];
      acc -= 0.5 * (std::log(2.0 * std::numbers::pi * var[c][j]) + diff * diff / var[c][j]);
    }
    log_joint[c] = acc;
  }
  const double hi = std::max(log_joint[0], log_joint[1]);
  const double e0 = std::exp(log_joint[0] - hi);
  const double e1 = std::exp(log_joint[1] - hi);
  return clamp_prob(e1 / (e0 + e1));
}

// ---------------------------------------------------------------------------
// Decision tree

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // weighted child impurity, n_L*G_L + n_R*G_R
};

// n * Gini for a node with counts (a, b).
double scaled_gini(double a, double b) {
  const double n = a + b;
  if (n == 0.0) return 0.0;
  return n - (a * a + b * b) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, TreeOptions opt)
      : x_(x), y_(y), opt_(opt) {}

  DecisionTreeModel build() {
    DecisionTreeModel model;
    model.max_depth = opt_.max_depth;
    model.min_leaf = opt_.min_leaf;
    model.dims = x_.cols();
    std::vector<std::size_t> idx(x_.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    grow(model, idx, 0);
    return model;
  }

 private:
  int grow(DecisionTreeModel& model, std::vector<std::size_t>& idx, int depth) {
    TreeNode node;
    node.depth = depth;
    for (auto i : idx) (y_[i] == 1 ? node.n1 : node.n0)++;
    const int id = static_cast<int>(model.nodes.size());
    model.nodes.push_back(node);

    const bool pure = node.n0 == 0 || node.n1 == 0;
    if (depth >= opt_.max_depth || pure || idx.size() < 2 * std::max<std::size_t>(opt_.min_leaf, 1)) {
      return id;
    }
    const auto split = best_split(idx, node);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (x_(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    model.nodes[id].feature = split.feature;
    model.nodes[id].threshold = split.threshold;
    const int l = grow(model, left, depth + 1);
    model.nodes[id].left = l;
    const int r = grow(model, right, depth + 1);
    model.nodes[id].right = r;
    return id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& idx, const TreeNode& node) const {
    constexpr double kTol = 1e-12;
    const double parent = scaled_gini(static_cast<double>(node.n0), static_cast<double>(node.n1));
    SplitChoice best;
    best.score = parent - kTol;  // a split must strictly reduce impurity
    const std::size_t n = idx.size();
    const std::size_t min_leaf = std::max<std::size_t>(opt_.min_leaf, 1);
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      double l0 = 0.0, l1 = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        (y_[order[k]] == 1 ? l1 : l0) += 1.0;
        const double v = x_(order[k], f);
        const double next = x_(order[k + 1], f);
        if (!(v < next)) continue;
        const std::size_t n_left = k + 1;
        if (n_left < min_leaf || n - n_left < min_leaf) continue;
        const double r0 = static_cast<double>(node.n0) - l0;
        const double r1 = static_cast<double>(node.n1) - l1;
        const double score = scaled_gini(l0, l1) + scaled_gini(r0, r1);
        if (score < best.score - (best.feature < 0 ? 0.0 : kTol)) {
          double mid = v + 0.5 * (next - v);
          if (!(mid < next)) mid = v;
          best = {static_cast<int>(f), mid, score};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  TreeOptions opt_;
};

}  // namespace

DecisionTreeModel fit_decision_tree(const Matrix& x, std::span<const int> y, TreeOptions options) {
  check_binary_training(x, y);
  require(options.max_depth >= 0, "max_depth must be non-negative");
  return TreeBuilder(x, y, options).build();
}

DecisionTreeModel fit_decision_tree(const Dataset& ds, TreeOptions options) {
  return fit_decision_tree(ds.x, ds.y, options);
}

const TreeNode& DecisionTreeModel::leaf_for(std::span<const double> x) const {
  require(x.size() == dims, "decision tree: feature dimension mismatch");
  require(!nodes.empty(), "decision tree: model not fitted");
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) {
    node = &nodes[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

double DecisionTreeModel::predict_proba(std::span<const double> x) const {
  const TreeNode& leaf = leaf_for(x);
  return (static_cast<double>(leaf.n1) + 1.0) / (static_cast<double>(leaf.n0 + leaf.n1) + 2.0);
}

TreeStats tree_stats(const DecisionTreeModel& model) {
  TreeStats s;
  s.max_depth = model.max_depth;
  s.max_conditions = model.max_depth >= 63 ? SIZE_MAX
                                           : (std::size_t{1} << model.max_depth) - 1;
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& node : model.nodes) {
    if (node.is_leaf()) {
      const std::size_t c = node.n0 + node.n1;
      weighted += static_cast<double>(c) * node.depth;
      total += c;
    } else {
      ++s.n_conditions;
    }
  }
  s.avg_depth = total > 0 ? weighted / static_cast<double>(total) : 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Permutation importance

double sensitivity_of(std::span<const int> truth, std::span<const int> predicted) {
  require(truth.size() == predicted.size(), "sensitivity: length mismatch");
  std::size_t tp = 0, pos = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      ++pos;
      if (predicted[i] == 1) ++tp;
    }
  }
  require(pos > 0, "sensitivity: no positive samples");
  return static_cast<double>(tp) / static_cast<double>(pos);
}

std::vector<double> permutation_importance(const LabelPredictor& predict, const Matrix& x,
                                           std::span<const int> y, std::size_t repeats,
                                           std::uint64_t seed) {
  require(repeats > 0, "permutation_importance: repeats must be positive");
  require(x.rows() == y.size(), "permutation_importance: row/label mismatch");
  const double baseline = sensitivity_of(y, predict(x));
  std::vector<double> importance(x.cols(), 0.0);
  std::vector<std::size_t> perm(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Rng rng(seed, j * repeats + r);
      rng.shuffle(std::span<std::size_t>(perm));
      Matrix shuffled = x;
      for (std::size_t i = 0; i < x.rows(); ++i) shuffled(i, j) = x(perm[i], j);
      acc += baseline - sensitivity_of(y, predict(shuffled));
    }
    importance[j] = acc / static_cast<double>(repeats);
  }
  return importance;
}

namespace {

template <typename Model>
LabelPredictor half_threshold(const Model& model) {
  return [&model](const Matrix& x) {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = model.predict_proba(x.row(i)) >= 0.5;
    return out;
  };
}

}  // namespace

std::vector<double> permutation_importance(const NaiveBayesModel& model, const Dataset& ds,
                                           std::size_t repeats, std::uint64_t seed) {
  return permutation_importance(half_threshold(model), ds.x, ds.y, repeats, seed);
}

std::vector<double> permutation_importance(const DecisionTreeModel& model, const Dataset& ds,
                                           std::size_t repeats, std::uint64_t seed) {
  return permutation_importance(half_threshold(model), ds.x, ds.y, repeats, seed);
}

}  // namespace mpf
