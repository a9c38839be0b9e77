#include "beeps/analysis/lowerbound.hpp"

#include <cmath>
#include <string>

#include "beeps/jitterjump.hpp"

namespace beeps::analysis {

Topology build_lowerbound_graph(std::size_t k) { return cycle_of_blocks(k); }

std::vector<std::pair<NodeId, NodeId>> twin_pairs(std::size_t k) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(static_cast<NodeId>(4 * i + 1), static_cast<NodeId>(4 * i + 2));
  return out;
}

TwinProtocol parse_twin_protocol(std::string_view name) {
  if (name == "jitterjump") return TwinProtocol::JitterJump;
  if (name == "coinflip") return TwinProtocol::CoinFlip;
  throw ConfigError("unknown protocol '" + std::string(name) + "' (expected jitterjump or coinflip)");
}

std::string_view twin_protocol_name(TwinProtocol p) noexcept {
  return p == TwinProtocol::JitterJump ? "jitterjump" : "coinflip";
}

namespace {

bool same_state(DiscreteEngine& engine, TwinProtocol protocol, NodeId a, NodeId b) {
  if (protocol == TwinProtocol::JitterJump) {
    return engine.protocol_as<JitterJumpNode>(a).state() == engine.protocol_as<JitterJumpNode>(b).state();
  }
  return engine.protocol_as<CoinFlipNode>(a).history() == engine.protocol_as<CoinFlipNode>(b).history();
}

}  // namespace

TwinCouplingStats twin_coupling_experiment(const TwinCouplingConfig& cfg) {
  const Topology graph = build_lowerbound_graph(cfg.blocks);
  const auto pairs = twin_pairs(cfg.blocks);
  const auto q = static_cast<Slot>(std::ceil(cfg.kappa * static_cast<double>(graph.max_degree())));
  const JitterJumpParams params{q, cfg.eta, false, 1};

  TwinCouplingStats stats;
  stats.trials = cfg.trials;
  stats.slots = cfg.slots;
  std::vector<std::uint8_t> before(pairs.size());

  for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, trial, Stream::Trial);
    auto factory = [&](NodeId v) -> std::unique_ptr<SlotProtocol> {
      // With shared randomness c_i reuses b_i's stream.
      const NodeId stream_id = (cfg.shared_randomness && v % 4 == 2) ? v - 1 : v;
      Rng rng(derive_seed(trial_seed, stream_id, Stream::Protocol));
      if (cfg.protocol == TwinProtocol::JitterJump) return std::make_unique<JitterJumpNode>(params, rng);
      return std::make_unique<CoinFlipNode>(rng);
    };
    DiscreteEngine engine(graph, q, WakeupSchedule::simultaneous(graph.size()), factory);

    for (std::uint64_t s = 0; s < cfg.slots; ++s) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        before[i] = same_state(engine, cfg.protocol, pairs[i].first, pairs[i].second) ? 1 : 0;
      }
      const auto& outcome = engine.step_slot();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [b, c] = pairs[i];
        if (before[i]) {
          ++stats.same_state_observations;
          const bool b_beeped = outcome[b] == SlotEvent::Beeped;
          const bool c_beeped = outcome[c] == SlotEvent::Beeped;
          if (b_beeped == c_beeped) ++stats.same_action_observations;
        }
        if (cfg.shared_randomness && !same_state(engine, cfg.protocol, b, c)) ++stats.divergences;
      }
    }
    for (const auto& [b, c] : pairs) {
      if (same_state(engine, cfg.protocol, b, c)) {
        ++stats.trials_with_identical_pair;
        break;
      }
    }
  }
  return stats;
}

}  // namespace beeps::analysis
