#include "beeps/analysis/ballsbins.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "beeps/rng.hpp"

namespace beeps::analysis {

namespace {

using Float = boost::multiprecision::cpp_bin_float_50;

double ratio(const BigInt& num, const BigInt& den) {
  return static_cast<double>(Float(num) / Float(den));
}

}  // namespace

std::vector<BigInt> stirling2_row(unsigned m) {
  // S2(j, k) = k S2(j-1, k) + S2(j-1, k-1), built one row at a time.
  std::vector<BigInt> row{1};
  for (unsigned j = 1; j <= m; ++j) {
    std::vector<BigInt> next(j + 1, 0);
    for (unsigned k = 1; k <= j; ++k) {
      const BigInt keep = k < row.size() ? row[k] * k : BigInt(0);
      next[k] = keep + row[k - 1];
    }
    row = std::move(next);
  }
  return row;
}

OccupancyDistribution bb_exact(unsigned balls, unsigned bins) {
  if (bins == 0) throw std::domain_error("bb_exact: need at least one bin");
  OccupancyDistribution out;
  out.balls = balls;
  out.bins = bins;
  out.total = boost::multiprecision::pow(BigInt(bins), balls);
  const unsigned kmax = std::min(balls, bins);
  out.counts.assign(kmax + 1, 0);
  const auto s2 = stirling2_row(balls);
  // C(n, k) k! = n (n-1) ... (n-k+1).
  BigInt falling = 1;
  for (unsigned k = 0; k <= kmax; ++k) {
    if (k > 0) falling *= bins - k + 1;
    out.counts[k] = falling * s2[k];
  }
  BigInt weighted = 0;
  out.pmf.resize(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) {
    out.pmf[k] = ratio(out.counts[k], out.total);
    weighted += out.counts[k] * k;
  }
  out.mean = ratio(weighted, out.total);
  return out;
}

double OccupancyDistribution::prob_greater(double x) const {
  BigInt above = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (static_cast<double>(k) > x) above += counts[k];
  }
  return ratio(above, total);
}

double EmpiricalOccupancy::frequency_greater(double x) const {
  std::uint64_t above = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (static_cast<double>(k) > x) above += hits[k];
  }
  return static_cast<double>(above) / static_cast<double>(trials);
}

EmpiricalOccupancy bb_montecarlo(unsigned balls, unsigned bins, std::uint64_t trials, std::uint64_t seed) {
  if (bins == 0) throw std::domain_error("bb_montecarlo: need at least one bin");
  if (trials == 0) throw std::domain_error("bb_montecarlo: need at least one trial");
  EmpiricalOccupancy out;
  out.balls = balls;
  out.bins = bins;
  out.trials = trials;
  out.hits.assign(std::min(balls, bins) + 1, 0);
  Rng rng(derive_seed(seed, 0, Stream::MonteCarlo));
  // Bin stamps avoid clearing an occupancy array every trial.
  std::vector<std::uint64_t> stamp(bins, 0);
  for (std::uint64_t t = 1; t <= trials; ++t) {
    unsigned occupied = 0;
    for (unsigned b = 0; b < balls; ++b) {
      auto& s = stamp[rng.below(bins)];
      if (s != t) {
        s = t;
        ++occupied;
      }
    }
    ++out.hits[occupied];
  }
  return out;
}

AgreementReport compare_occupancy(const OccupancyDistribution& exact, const EmpiricalOccupancy& sample, double sigmas) {
  AgreementReport report;
  const auto n = static_cast<double>(sample.trials);
  for (std::size_t k = 0; k < exact.pmf.size(); ++k) {
    const double p = exact.pmf[k];
    const double phat = sample.frequency(k);
    ++report.bins_checked;
    if (exact.counts[k] == 0 || exact.counts[k] == exact.total) {
      if (phat != p) ++report.bins_outside;
      continue;
    }
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double z = std::abs(phat - p) / sigma;
    report.worst_z = std::max(report.worst_z, z);
    // Tail mass of a sigmas-wide normal deviation, measured on the exact
    // binomial law so that bins expecting far less than one hit are judged
    // fairly.
    const boost::math::binomial_distribution<double> law(n, p);
    const double hits = static_cast<double>(k < sample.hits.size() ? sample.hits[k] : 0);
    const double lower = boost::math::cdf(law, hits);
    const double upper = hits > 0.0 ? boost::math::cdf(boost::math::complement(law, hits - 1.0)) : 1.0;
    const double tail = std::min(1.0, 2.0 * std::min(lower, upper));
    report.worst_tail = std::min(report.worst_tail, tail);
    if (tail < std::erfc(sigmas / std::sqrt(2.0))) ++report.bins_outside;
  }
  return report;
}

}  // namespace beeps::analysis
