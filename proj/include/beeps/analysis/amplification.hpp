#pragma once

#include <cmath>
#include <stdexcept>

namespace beeps::analysis {

/// Periods after which every node is good with probability 1 - n^-q, when a
/// bad node turns good with probability p within c periods:
/// (c (q + 1) / p) ln n.
inline double amplification_rounds(double c, double p, double q, double n) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("amplification_rounds: p must lie in (0, 1]");
  if (!(c >= 1.0)) throw std::domain_error("amplification_rounds: c must be at least 1");
  if (!(q >= 0.0)) throw std::domain_error("amplification_rounds: q must be nonnegative");
  if (!(n >= 2.0)) throw std::domain_error("amplification_rounds: n must be at least 2");
  return c * (q + 1.0) / p * std::log(n);
}

/// Lower bound on the chance that a bad node of the slotted protocol turns
/// good over two periods: (1/2) exp(-16 eta / (1 - 3 eta)).
inline double bad_to_good_probability(double eta) {
  if (!(eta > 0.0 && eta < 1.0 / 3.0)) throw std::domain_error("bad_to_good_probability: eta must lie in (0, 1/3)");
  return 0.5 * std::exp(-16.0 * eta / (1.0 - 3.0 * eta));
}

}  // namespace beeps::analysis
