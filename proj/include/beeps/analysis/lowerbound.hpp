#pragma once

// Twin-coupling experiment on the cycle-of-blocks graph.
//
// In every block the vertices b_i and c_i have the same closed neighbourhood,
// so an anonymous protocol cannot tell them apart: whenever they are in the
// same state and take the same action they stay in the same state. The
// experiment measures (a) that twins fed identical randomness never diverge,
// (b) how often same-state twins pick the same action in a slot, and (c) how
// often at least one twin pair is still identical after a given number of
// slots.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "beeps/discrete_engine.hpp"
#include "beeps/rng.hpp"
#include "beeps/topology.hpp"

namespace beeps::analysis {

/// cycle_of_blocks(k); twins of block i are nodes 4i+1 and 4i+2.
Topology build_lowerbound_graph(std::size_t k);
std::vector<std::pair<NodeId, NodeId>> twin_pairs(std::size_t k);

/// Beeps with probability 1/2 in every slot. Its state is the full history
/// of actions and feedback, so twins stay identical exactly as long as
/// they keep choosing the same action.
class CoinFlipNode final : public SlotProtocol {
 public:
  explicit CoinFlipNode(Rng rng) : rng_(rng) {}

  bool beep_now(Slot) override {
    last_beep_ = rng_.coin();
    return last_beep_;
  }
  void end_slot(Slot, bool heard) override {
    history_.push_back(static_cast<std::uint8_t>((last_beep_ ? 2 : 0) | (heard ? 1 : 0)));
  }

  [[nodiscard]] const std::vector<std::uint8_t>& history() const noexcept { return history_; }

 private:
  Rng rng_;
  bool last_beep_ = false;
  std::vector<std::uint8_t> history_;
};

enum class TwinProtocol { JitterJump, CoinFlip };

TwinProtocol parse_twin_protocol(std::string_view name);
std::string_view twin_protocol_name(TwinProtocol p) noexcept;

struct TwinCouplingConfig {
  std::size_t blocks = 16;
  TwinProtocol protocol = TwinProtocol::JitterJump;
  std::uint64_t slots = 100;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  /// Twins draw from one shared stream (the coupling branch).
  bool shared_randomness = false;
  double eta = 1.0 / 16.0;
  double kappa = 64.0;
};

struct TwinCouplingStats {
  std::uint64_t trials = 0;
  std::uint64_t slots = 0;
  std::uint64_t divergences = 0;  // (trial, slot, pair) with differing states
  std::uint64_t same_state_observations = 0;
  std::uint64_t same_action_observations = 0;
  std::uint64_t trials_with_identical_pair = 0;  // after the last slot

  [[nodiscard]] double same_action_frequency() const noexcept {
    return same_state_observations == 0 ? 0.0
                                        : static_cast<double>(same_action_observations) /
                                              static_cast<double>(same_state_observations);
  }
  [[nodiscard]] double retained_fraction() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(trials_with_identical_pair) / static_cast<double>(trials);
  }
};

TwinCouplingStats twin_coupling_experiment(const TwinCouplingConfig& cfg);

}  // namespace beeps::analysis
