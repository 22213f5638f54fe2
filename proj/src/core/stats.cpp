#include "mpf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "mpf/error.hpp"

namespace mpf {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted) {
  require(truth.size() == predicted.size(), "confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) (predicted[i] == 1 ? c.tp : c.fn)++;
    else (predicted[i] == 1 ? c.fp : c.tn)++;
  }
  return c;
}

Rates metrics(const ConfusionCounts& c) {
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  Rates r;
  r.sens = ratio(c.tp, c.tp + c.fn);
  r.spec = ratio(c.tn, c.tn + c.fp);
  r.ppv = ratio(c.tp, c.tp + c.fp);
  r.npv = ratio(c.tn, c.tn + c.fn);
  if (r.spec) r.fpr = 1.0 - *r.spec;
  if (r.sens) r.fnr = 1.0 - *r.sens;
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

Interval clopper_pearson(std::size_t k, std::size_t n, double conf) {
  require(n >= 1 && k <= n, "clopper_pearson: need 0 <= k <= n, n >= 1");
  require(conf > 0.0 && conf < 1.0, "clopper_pearson: conf must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - conf);
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  Interval out;
  out.method = "clopper-pearson";
  out.lo = k == 0 ? 0.0
                  : boost::math::quantile(boost::math::beta_distribution<double>(kd, nd - kd + 1.0), tail);
  out.hi = k == n ? 1.0
                  : boost::math::quantile(boost::math::beta_distribution<double>(kd + 1.0, nd - kd),
                                          1.0 - tail);
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  require(!sorted.empty(), "quantile of empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(std::vector<double> replicates, double conf) {
  std::sort(replicates.begin(), replicates.end());
  const double tail = 0.5 * (1.0 - conf);
  return {quantile_sorted(replicates, tail), quantile_sorted(replicates, 1.0 - tail), "percentile", false};
}

double mean_of(std::span<const double> v) {
  require(!v.empty(), "mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

BcaResult bca_bootstrap(const kernels::Statistic& stat, std::span<const double> sample,
                        std::size_t replicates, double conf, std::uint64_t seed, Execution exec) {
  require(sample.size() >= 10, "bca_bootstrap: sample size must be >= 10");
  require(replicates >= 1000, "bca_bootstrap: need at least 1000 replicates");
  require(conf > 0.0 && conf < 1.0, "bca_bootstrap: conf must lie in (0, 1)");

  BcaResult out;
  out.observed = stat(sample);
  out.interval.method = "bca";
  auto reps = exec == Execution::parallel
                  ? kernels::parallel::bootstrap_replicates(sample, stat, replicates, seed)
                  : kernels::serial::bootstrap_replicates(sample, stat, replicates, seed);
  std::sort(reps.begin(), reps.end());
  if (reps.front() == reps.back()) {
    out.interval.lo = out.interval.hi = out.observed;
    out.interval.degenerate = true;
    return out;
  }

  const auto b = static_cast<double>(replicates);
  const auto below = static_cast<double>(
      std::lower_bound(reps.begin(), reps.end(), out.observed) - reps.begin());
  const double frac = std::clamp(below / b, 0.5 / b, 1.0 - 0.5 / b);
  out.z0 = normal_quantile(frac);

  // Jackknife acceleration.
  const std::size_t n = sample.size();
  std::vector<double> loo(n);
  std::vector<double> buf(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(i), buf.begin());
    std::copy(sample.begin() + static_cast<std::ptrdiff_t>(i) + 1, sample.end(),
              buf.begin() + static_cast<std::ptrdiff_t>(i));
    loo[i] = stat(buf);
  }
  const double loo_mean = mean_of(loo);
  double num = 0.0, den = 0.0;
  for (double v : loo) {
    const double dlt = loo_mean - v;
    num += dlt * dlt * dlt;
    den += dlt * dlt;
  }
  out.acceleration = den > 0.0 ? num / (6.0 * std::pow(den, 1.5)) : 0.0;

  const double z_lo = normal_quantile(0.5 * (1.0 - conf));
  auto adjusted = [&](double z) {
    const double s = out.z0 + z;
    return normal_cdf(out.z0 + s / (1.0 - out.acceleration * s));
  };
  out.interval.lo = quantile_sorted(reps, adjusted(z_lo));
  out.interval.hi = quantile_sorted(reps, adjusted(-z_lo));
  return out;
}

TestResult mcnemar_exact(std::size_t b, std::size_t c) {
  TestResult r;
  r.statistic = "min_discordant";
  r.method = "mcnemar-exact-binomial";
  const std::size_t n = b + c;
  const std::size_t k = std::min(b, c);
  r.value = static_cast<double>(k);
  if (n == 0) {
    r.p_value = 1.0;
    return r;
  }
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(dist, static_cast<double>(k)));
  return r;
}

TestResult permutation_test(std::span<const int> correct_a, std::span<const int> correct_b,
                            std::size_t iterations, std::uint64_t seed, Execution exec) {
  require(!correct_a.empty() && correct_a.size() == correct_b.size(),
          "permutation_test: sequences must have equal non-zero length");
  require(iterations >= 1, "permutation_test: need at least one iteration");
  std::vector<int> diffs;
  long long observed = 0;
  for (std::size_t i = 0; i < correct_a.size(); ++i) {
    const int d = correct_a[i] - correct_b[i];
    observed += d;
    if (d != 0) diffs.push_back(d);
  }
  TestResult r;
  r.statistic = "accuracy_difference";
  r.value = static_cast<double>(observed) / static_cast<double>(correct_a.size());
  const long long target = std::llabs(observed);
  const std::size_t m = diffs.size();

  if (m < 63 && (std::size_t{1} << m) <= iterations) {
    const std::size_t patterns = std::size_t{1} << m;
    std::size_t hits = 0;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      long long s = 0;
      for (std::size_t i = 0; i < m; ++i) s += (mask >> i) & 1U ? -diffs[i] : diffs[i];
      if (std::llabs(s) >= target) ++hits;
    }
    r.p_value = static_cast<double>(hits) / static_cast<double>(patterns);
    r.method = "sign-swap exact enumeration";
    return r;
  }
  const std::size_t exceed =
      exec == Execution::parallel
          ? kernels::parallel::sign_flip_exceedances(diffs, target, iterations, seed)
          : kernels::serial::sign_flip_exceedances(diffs, target, iterations, seed);
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(iterations + 1);
  r.method = "sign-swap monte carlo";
  r.seed = seed;
  return r;
}

HolmResult holm_correction(std::span<const double> p_values, double alpha) {
  require(!p_values.empty(), "holm_correction: no p-values");
  for (double p : p_values) require(p >= 0.0 && p <= 1.0, "holm_correction: p-values must lie in [0, 1]");
  const std::size_t m = p_values.size();
  HolmResult out;
  out.alpha = alpha;
  out.rejected.assign(m, false);
  out.threshold.assign(m, 0.0);
  out.order.resize(m);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  bool still_rejecting = true;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t h = out.order[i];
    out.threshold[h] = alpha / static_cast<double>(m - i);
    if (still_rejecting && p_values[h] <= out.threshold[h]) {
      out.rejected[h] = true;
    } else {
      still_rejecting = false;
    }
  }
  return out;
}

std::vector<bool> bonferroni(std::span<const double> p_values, double alpha) {
  std::vector<bool> out;
  for (double p : p_values) out.push_back(p <= alpha / static_cast<double>(p_values.size()));
  return out;
}

double hedges_factor(std::size_t n1, std::size_t n2) {
  return 1.0 - 3.0 / (4.0 * static_cast<double>(n1 + n2) - 9.0);
}

std::optional<double> hedges_d(double mean1, double sd1, std::size_t n1, double mean2, double sd2,
                               std::size_t n2) {
  require(n1 >= 2 && n2 >= 2, "hedges_d: each group needs at least two observations");
  const double pooled = std::sqrt((static_cast<double>(n1 - 1) * sd1 * sd1 +
                                   static_cast<double>(n2 - 1) * sd2 * sd2) /
                                  static_cast<double>(n1 + n2 - 2));
  if (!(pooled > 0.0)) return std::nullopt;
  return (mean1 - mean2) / pooled * hedges_factor(n1, n2);
}

SampleSize sample_size_paired(double delta, double alpha, double power, double p1, double p2,
                              double rho) {
  require(delta > 0.0, "sample_size_paired: delta must be positive");
  require(alpha > 0.0 && alpha < 1.0 && power > 0.0 && power < 1.0,
          "sample_size_paired: alpha and power must lie in (0, 1)");
  require(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0, "sample_size_paired: invalid proportions");
  require(rho > -1.0 && rho < 1.0, "sample_size_paired: rho must lie in (-1, 1)");
  const double v1 = p1 * (1.0 - p1);
  const double v2 = p2 * (1.0 - p2);
  SampleSize out;
  out.sigma_d2 = v1 + v2 - 2.0 * rho * std::sqrt(v1 * v2);
  out.sigma_d2_literal = v1 + v2 - 2.0 * p1 * p2 * rho;
  require(out.sigma_d2 > 0.0, "sample_size_paired: variance of the difference must be positive");
  const double z = normal_quantile(1.0 - alpha / 2.0) + normal_quantile(power);
  out.unrounded = z * z * out.sigma_d2 / (delta * delta);
  out.n = static_cast<std::size_t>(std::ceil(out.unrounded));
  return out;
}

double effective_sample_size(std::size_t n1, std::size_t n0) {
  require(n1 >= 1 && n0 >= 1, "effective_sample_size: both groups must be non-empty");
  return 2.0 * static_cast<double>(n1) * static_cast<double>(n0) / static_cast<double>(n1 + n0);
}

PowerResult power_effective(std::size_t n1, std::size_t n0, double delta_abs, double sigma,
                            double alpha) {
  require(sigma > 0.0, "power_effective: sigma must be positive");
  PowerResult out;
  out.n_eff = effective_sample_size(n1, n0);
  out.power = normal_cdf(std::sqrt(out.n_eff) * std::abs(delta_abs) / sigma -
                         normal_quantile(1.0 - alpha / 2.0));
  return out;
}

CompositeScore composite_score(double sens, double interp, double safety, CompositeWeights w) {
  for (double v : {sens, interp, safety}) require(v >= 0.0 && v <= 1.0, "composite_score: inputs must lie in [0, 1]");
  require(w.sensitivity >= 0.0 && w.interpretability >= 0.0 && w.safety >= 0.0,
          "composite_score: weights must be non-negative");
  const double total = w.sensitivity + w.interpretability + w.safety;
  require(total > 0.0, "composite_score: weights sum to zero");
  CompositeScore out;
  if (std::abs(total - 1.0) > 1e-9) {
    out.renormalized = true;
    w.sensitivity /= total;
    w.interpretability /= total;
    w.safety /= total;
  }
  out.value = w.sensitivity * sens + w.interpretability * interp + w.safety * safety;
  return out;
}

std::string to_string(Grade g) {
  switch (g) {
    case Grade::A: return "A";
    case Grade::B: return "B";
    case Grade::C: return "C";
    case Grade::D: return "D";
  }
  return "D";
}

Grade clinical_grade(double score, double sens, double interp) {
  if (score >= 0.75 && sens >= 0.80 && interp >= 0.70) return Grade::A;
  if (score >= 0.65 && sens >= 0.70) return Grade::B;
  if (score >= 0.55 && sens >= 0.60) return Grade::C;
  return Grade::D;
}

BoundTerms imbalance_bound(double empirical_risk, std::size_t n1, std::size_t n, std::size_t k,
                           double delta, double vc_dim, double c, std::optional<double> rho) {
  require(n1 >= 1 && n >= n1 && k >= 1, "imbalance_bound: need n >= n1 >= 1 and K >= 1");
  require(delta > 0.0 && delta < 1.0, "imbalance_bound: delta must lie in (0, 1)");
  const auto nd = static_cast<double>(n);
  BoundTerms t;
  t.rho = rho.value_or(static_cast<double>(n - n1) / static_cast<double>(n1));
  require(t.rho > 0.0, "imbalance_bound: rho must be positive");
  t.empirical = empirical_risk;
  t.minority = std::sqrt((2.0 * std::log(static_cast<double>(k)) + std::log(2.0 / delta)) /
                         static_cast<double>(n1));
  t.imbalance = c * std::sqrt(std::max(0.0, std::log(t.rho))) / std::sqrt(nd);
  t.constraint = std::sqrt(vc_dim * std::log(nd) / nd);
  t.total = t.empirical + t.minority + t.imbalance + t.constraint;
  return t;
}

}  // namespace mpf
