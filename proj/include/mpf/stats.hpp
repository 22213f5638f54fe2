#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/kernels.hpp"

namespace mpf {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted);

// Rates with a zero denominator stay empty rather than reading as 0.
struct Rates {
  std::optional<double> sens, spec, ppv, npv, fpr, fnr;
};

Rates metrics(const ConfusionCounts& c);

double normal_cdf(double x);
double normal_quantile(double p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  std::string method;
  bool degenerate = false;
};

Interval clopper_pearson(std::size_t successes, std::size_t trials, double conf = 0.95);

// Linear-interpolation (type 7) quantile of a sorted sample.
double quantile_sorted(std::span<const double> sorted, double q);
Interval percentile_interval(std::vector<double> replicates, double conf);

struct BcaResult {
  Interval interval;
  double observed = 0.0;
  double z0 = 0.0;
  double acceleration = 0.0;
};

BcaResult bca_bootstrap(const kernels::Statistic& stat, std::span<const double> sample,
                        std::size_t replicates = 10000, double conf = 0.95,
                        std::uint64_t seed = 0, Execution exec = Execution::parallel);

double mean_of(std::span<const double> v);

struct TestResult {
  std::string statistic;
  double value = 0.0;
  double p_value = 1.0;
  std::string method;
  std::optional<std::uint64_t> seed;
};

// Two-sided exact binomial test on discordant pairs.
TestResult mcnemar_exact(std::size_t b, std::size_t c);

// Paired accuracy difference with a sign-swap null. When the discordant
// pairs admit no more than `iterations` swap patterns the null is enumerated
// exactly; otherwise p = (1 + exceedances) / (iterations + 1).
TestResult permutation_test(std::span<const int> correct_a, std::span<const int> correct_b,
                            std::size_t iterations = 10000, std::uint64_t seed = 0,
                            Execution exec = Execution::parallel);

struct HolmResult {
  double alpha = 0.05;
  std::vector<bool> rejected;        // input order
  std::vector<double> threshold;     // step threshold applied to each hypothesis
  std::vector<std::size_t> order;    // indices sorted by ascending p
};

HolmResult holm_correction(std::span<const double> p_values, double alpha = 0.05);
std::vector<bool> bonferroni(std::span<const double> p_values, double alpha = 0.05);

double hedges_factor(std::size_t n1, std::size_t n2);
// Pooled-sd Cohen's d times the small-sample factor; empty when the pooled sd is 0.
std::optional<double> hedges_d(double mean1, double sd1, std::size_t n1, double mean2,
                               double sd2, std::size_t n2);

struct SampleSize {
  std::size_t n = 0;
  double unrounded = 0.0;
  double sigma_d2 = 0.0;          // covariance form actually used
  double sigma_d2_literal = 0.0;  // p1 q1 + p2 q2 - 2 p1 p2 rho, for the record
};

SampleSize sample_size_paired(double delta, double alpha, double power, double p1, double p2,
                              double rho);

// Harmonic-mean effective sample size 2 n1 n0 / (n1 + n0).
double effective_sample_size(std::size_t n1, std::size_t n0);

struct PowerResult {
  double n_eff = 0.0;
  double power = 0.0;
};

PowerResult power_effective(std::size_t n1, std::size_t n0, double delta_abs, double sigma,
                            double alpha);

struct CompositeWeights {
  double sensitivity = 0.5;
  double interpretability = 0.3;
  double safety = 0.2;
};

struct CompositeScore {
  double value = 0.0;
  bool renormalized = false;
};

CompositeScore composite_score(double sens, double interp, double safety,
                               CompositeWeights w = {});

enum class Grade { A, B, C, D };
std::string to_string(Grade g);
Grade clinical_grade(double score, double sens, double interp);

struct BoundTerms {
  double empirical = 0.0;
  double minority = 0.0;
  double imbalance = 0.0;
  double constraint = 0.0;
  double total = 0.0;
  double rho = 1.0;
};

// rho defaults to (n - n1) / n1.
BoundTerms imbalance_bound(double empirical_risk, std::size_t n1, std::size_t n, std::size_t k,
                           double delta, double vc_dim, double c = 1.0,
                           std::optional<double> rho = std::nullopt);

}  // namespace mpf
