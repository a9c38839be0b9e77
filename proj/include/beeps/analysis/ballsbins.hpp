#pragma once

// Occupancy distribution of m balls thrown independently and uniformly into
// n bins: exact via Stirling numbers of the second kind in big-integer
// arithmetic, and by Monte Carlo.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace beeps::analysis {

using BigInt = boost::multiprecision::cpp_int;

struct OccupancyDistribution {
  unsigned balls = 0;
  unsigned bins = 0;
  /// counts[k]: placements (out of bins^balls) leaving exactly k bins occupied.
  std::vector<BigInt> counts;
  BigInt total;
  std::vector<double> pmf;  // index = number of occupied bins
  double mean = 0.0;

  /// P[Z > x], computed exactly then rounded.
  [[nodiscard]] double prob_greater(double x) const;
};

/// S2(m, k) for k = 0..m.
std::vector<BigInt> stirling2_row(unsigned m);

OccupancyDistribution bb_exact(unsigned balls, unsigned bins);

struct EmpiricalOccupancy {
  unsigned balls = 0;
  unsigned bins = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> hits;  // index = number of occupied bins

  [[nodiscard]] double frequency(std::size_t k) const {
    return k < hits.size() ? static_cast<double>(hits[k]) / static_cast<double>(trials) : 0.0;
  }
  [[nodiscard]] double frequency_greater(double x) const;
};

EmpiricalOccupancy bb_montecarlo(unsigned balls, unsigned bins, std::uint64_t trials, std::uint64_t seed);

struct AgreementReport {
  std::size_t bins_checked = 0;
  std::size_t bins_outside = 0;
  double worst_z = 0.0;     // largest |p_hat - p| / sigma
  double worst_tail = 1.0;  // smallest exact two-sided binomial tail
};

/// Per-bin comparison at the `sigmas` level: a bin is outside when its exact
/// two-sided binomial tail is below erfc(sigmas / sqrt 2). Bins where the
/// exact probability is 0 or 1 must match exactly.
AgreementReport compare_occupancy(const OccupancyDistribution& exact, const EmpiricalOccupancy& sample, double sigmas);

}  // namespace beeps::analysis
