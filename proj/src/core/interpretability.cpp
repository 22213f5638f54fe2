#include "mpf/interpretability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpf/error.hpp"

namespace mpf {

void InterpretabilityWeights::validate() const {
  for (double w : {rule, prob, feature, clinical}) {
    if (!(w >= 0.0)) throw ConfigError("interpretability weights must be >= 0");
  }
  if (std::abs(rule + prob + feature + clinical - 1.0) > 1e-9) {
    throw ConfigError("interpretability weights must sum to 1");
  }
}

double rule_transparency(const TreeStats& stats) {
  if (stats.n_conditions == 0) return 1.0;
  require(stats.max_depth >= 1, "rule_transparency: max_depth must be >= 1");
  const double depth_ratio = stats.avg_depth / static_cast<double>(stats.max_depth);
  const double cond_ratio =
      static_cast<double>(stats.n_conditions) / static_cast<double>(stats.max_conditions);
  return std::clamp(1.0 - depth_ratio * cond_ratio, 0.0, 1.0);
}

double binary_entropy(double p) {
  require(p > 0.0 && p < 1.0, "binary_entropy: probability must lie in (0, 1)");
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double probabilistic_reasoning(std::span<const double> probs) {
  require(!probs.empty(), "probabilistic_reasoning: empty probability list");
  double h = 0.0;
  for (double p : probs) h += binary_entropy(p);
  return std::clamp(1.0 - h / static_cast<double>(probs.size()), 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "spearman: need equal lengths >= 2");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double feature_clarity(std::span<const double> model_importance,
                       std::span<const double> clinical_importance) {
  const auto r = spearman(model_importance, clinical_importance);
  return r ? std::max(0.0, *r) : 0.0;
}

double clinical_integration(double configured) {
  if (!(configured >= 0.0 && configured <= 1.0)) {
    throw ConfigError("i_clinical must lie in [0, 1]");
  }
  return configured;
}

InterpretabilityReport interpretability_total(const InterpretabilityComponents& c,
                                              const InterpretabilityWeights& w) {
  w.validate();
  for (double v : {c.rule, c.prob, c.feature, c.clinical}) {
    require(v >= 0.0 && v <= 1.0, "interpretability components must lie in [0, 1]");
  }
  InterpretabilityReport r;
  r.components = c;
  r.total = w.rule * c.rule + w.prob * c.prob + w.feature * c.feature + w.clinical * c.clinical;
  return r;
}

}  // namespace mpf
