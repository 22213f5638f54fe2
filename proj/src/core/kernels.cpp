#include "mpf/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mpf/error.hpp"
#include "mpf/random.hpp"

namespace mpf::kernels {

namespace {

double nearest_sq(std::span<const double> q, const Matrix& support, std::size_t skip) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t d = support.cols();
  for (std::size_t r = 0; r < support.rows(); ++r) {
    if (r == skip) continue;
    const double* s = support.row(r).data();
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = q[j] - s[j];
      acc += diff * diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

void resample(std::span<const double> sample, std::vector<double>& buf, std::uint64_t seed,
              std::size_t b) {
  Rng rng(seed, b);
  const std::size_t n = sample.size();
  for (std::size_t i = 0; i < n; ++i) buf[i] = sample[rng.below(n)];
}

long long flipped_sum(std::span<const int> diffs, std::uint64_t seed, std::size_t t) {
  Rng rng(seed, t);
  long long s = 0;
  for (int d : diffs) s += rng.coin() ? d : -d;
  return s;
}

}  // namespace

namespace serial {

std::vector<double> nearest_distances(const Matrix& query, const Matrix& support) {
  require(support.rows() > 0, "nearest_distances: empty support");
  require(query.cols() == support.cols(), "nearest_distances: width mismatch");
  std::vector<double> out(query.rows());
  for (std::size_t i = 0; i < query.rows(); ++i) {
    out[i] = std::sqrt(nearest_sq(query.row(i), support, kNoSkip));
  }
  return out;
}

std::vector<double> nearest_other_distances(const Matrix& points) {
  require(points.rows() >= 2, "nearest_other_distances: need at least two points");
  std::vector<double> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    out[i] = std::sqrt(nearest_sq(points.row(i), points, i));
  }
  return out;
}

std::vector<double> bootstrap_replicates(std::span<const double> sample, const Statistic& stat,
                                         std::size_t replicates, std::uint64_t seed) {
  std::vector<double> out(replicates);
  std::vector<double> buf(sample.size());
  for (std::size_t b = 0; b < replicates; ++b) {
    resample(sample, buf, seed, b);
    out[b] = stat(buf);
  }
  return out;
}

std::size_t sign_flip_exceedances(std::span<const int> diffs, long long observed,
                                  std::size_t iterations, std::uint64_t seed) {
  std::size_t count = 0;
  for (std::size_t t = 0; t < iterations; ++t) {
    if (std::llabs(flipped_sum(diffs, seed, t)) >= observed) ++count;
  }
  return count;
}

}  // namespace serial

namespace parallel {

std::vector<double> nearest_distances(const Matrix& query, const Matrix& support) {
  require(support.rows() > 0, "nearest_distances: empty support");
  require(query.cols() == support.cols(), "nearest_distances: width mismatch");
  const auto n = static_cast<std::ptrdiff_t>(query.rows());
  std::vector<double> out(query.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = std::sqrt(nearest_sq(query.row(r), support, kNoSkip));
  }
  return out;
}

std::vector<double> nearest_other_distances(const Matrix& points) {
  require(points.rows() >= 2, "nearest_other_distances: need at least two points");
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  std::vector<double> out(points.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = std::sqrt(nearest_sq(points.row(r), points, r));
  }
  return out;
}

std::vector<double> bootstrap_replicates(std::span<const double> sample, const Statistic& stat,
                                         std::size_t replicates, std::uint64_t seed) {
  std::vector<double> out(replicates);
  const auto total = static_cast<std::ptrdiff_t>(replicates);
#pragma omp parallel
  {
    std::vector<double> buf(sample.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < total; ++b) {
      resample(sample, buf, seed, static_cast<std::size_t>(b));
      out[static_cast<std::size_t>(b)] = stat(buf);
    }
  }
  return out;
}

std::size_t sign_flip_exceedances(std::span<const int> diffs, long long observed,
                                  std::size_t iterations, std::uint64_t seed) {
  long long count = 0;
  const auto total = static_cast<std::ptrdiff_t>(iterations);
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    if (std::llabs(flipped_sum(diffs, seed, static_cast<std::size_t>(t))) >= observed) ++count;
  }
  return static_cast<std::size_t>(count);
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mpf::kernels
