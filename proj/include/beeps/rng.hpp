#pragma once

// Seeded random streams.
//
// Every consumer of randomness derives its own stream from
// (master seed, entity id, purpose), so adding or removing a node never
// perturbs the draws of any other node. Bounded integer and real draws are
// implemented here rather than through <random> distributions because the
// latter are implementation-defined and would break cross-platform
// reproducibility of traces.

#include <cstdint>
#include <random>

namespace beeps {

enum class Stream : std::uint64_t {
  Protocol = 1,
  Wakeup = 2,
  Topology = 3,
  Trial = 4,
  MonteCarlo = 5,
};

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id, Stream purpose) noexcept {
  return mix64(mix64(mix64(master) ^ id) ^ static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection on the top of the range keeps the draw exactly uniform.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in the open interval (0, 1).
  double open01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform in the open interval (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * open01(); }

  bool coin() { return (engine_() >> 63) != 0; }

  bool operator==(const Rng&) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace beeps
