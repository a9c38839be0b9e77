#include "beeps/config.hpp"

#include <cmath>
#include <string>

namespace beeps {

std::uint32_t default_window(std::size_t n) {
  std::uint32_t r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return std::max<std::uint32_t>(r, 1);
}

SimConfig resolve_jitterjump(SimConfig cfg, const Topology& topo) {
  cfg.model = Model::Discrete;
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0 / 16.0)) throw ConfigError("eta must lie in (0, 1/16]");
  if (!(cfg.kappa >= 4.0 / cfg.eta)) {
    throw ConfigError("kappa must be at least 4/eta = " + std::to_string(4.0 / cfg.eta));
  }
  const double delta = static_cast<double>(std::max<std::size_t>(topo.max_degree(), 1));
  const auto needed = static_cast<Slot>(std::ceil(cfg.kappa * delta));
  if (cfg.slots_per_period == 0) {
    cfg.slots_per_period = needed;
  } else if (cfg.slots_per_period < needed) {
    throw ConfigError("Q = " + std::to_string(cfg.slots_per_period) + " is below kappa*Delta = " + std::to_string(needed));
  }
  if (cfg.window == 0) cfg.window = default_window(topo.size());
  if (cfg.max_periods == 0) throw ConfigError("max-periods must be positive");
  return cfg;
}

SimConfig resolve_beepfirst(SimConfig cfg) {
  cfg.model = Model::Continuous;
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(cfg.period > 0.0)) throw ConfigError("period must be positive");
  if (cfg.max_periods == 0) throw ConfigError("max-periods must be positive");
  return cfg;
}

}  // namespace beeps
