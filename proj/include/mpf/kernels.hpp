#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version; both derive randomness from (seed, task index) so their outputs are
// bit-identical regardless of thread count.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpf/matrix.hpp"

namespace mpf {

enum class Execution { serial, parallel };

}  // namespace mpf

namespace mpf::kernels {

using Statistic = std::function<double(std::span<const double>)>;

namespace serial {

// Euclidean distance from each query row to its nearest support row.
std::vector<double> nearest_distances(const Matrix& query, const Matrix& support);
// Distance from each row to its nearest other row (by index) of the same matrix.
std::vector<double> nearest_other_distances(const Matrix& points);
// B resamples with replacement; replicate b uses stream (seed, b).
std::vector<double> bootstrap_replicates(std::span<const double> sample, const Statistic& stat,
                                         std::size_t replicates, std::uint64_t seed);
// Number of random sign assignments s with |sum s_i d_i| >= observed.
std::size_t sign_flip_exceedances(std::span<const int> diffs, long long observed,
                                  std::size_t iterations, std::uint64_t seed);

}  // namespace serial

namespace parallel {

std::vector<double> nearest_distances(const Matrix& query, const Matrix& support);
std::vector<double> nearest_other_distances(const Matrix& points);
std::vector<double> bootstrap_replicates(std::span<const double> sample, const Statistic& stat,
                                         std::size_t replicates, std::uint64_t seed);
std::size_t sign_flip_exceedances(std::span<const int> diffs, long long observed,
                                  std::size_t iterations, std::uint64_t seed);

}  // namespace parallel

int max_threads();

}  // namespace mpf::kernels
