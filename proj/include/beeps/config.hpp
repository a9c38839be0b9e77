#pragma once

#include <cstdint>

#include "beeps/phase.hpp"
#include "beeps/topology.hpp"

namespace beeps {

enum class Model { Discrete, Continuous };

struct SimConfig {
  Model model = Model::Discrete;
  Slot slots_per_period = 0;  // Q; 0 derives ceil(kappa * Delta)
  double period = 1.0;        // T
  double kappa = 64.0;
  double eta = 1.0 / 16.0;
  double epsilon = 0.1;
  std::uint32_t window = 0;   // r; 0 derives ceil(log2 n)
  bool dynamic = false;
  bool delayed_interval = false;
  std::uint64_t master_seed = 1;
  std::uint64_t max_periods = 200;
};

/// Checks eta in (0, 1/16] and kappa >= 4/eta, then fills Q and r for `topo`.
/// An explicit Q must be at least kappa * Delta. Throws ConfigError.
SimConfig resolve_jitterjump(SimConfig cfg, const Topology& topo);

/// Checks epsilon in (0, 1) and T > 0. Throws ConfigError.
SimConfig resolve_beepfirst(SimConfig cfg);

/// ceil(log2 n), at least 1.
std::uint32_t default_window(std::size_t n);

}  // namespace beeps
