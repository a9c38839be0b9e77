#pragma once

// Lockstep slotted engine for the discrete beeping model.
//
// All nodes share slot boundaries but not period origins: a node's local
// period starts at its wake slot. In every slot each awake node either beeps
// or listens; a listener learns only whether at least one neighbour beeped.
// A beeping node gets no feedback at all.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "beeps/phase.hpp"
#include "beeps/topology.hpp"

namespace beeps {

/// Node-local protocol driven by the slotted engine. Implementations never see
/// a node identifier; the engine only tells them their local slot.
class SlotProtocol {
 public:
  virtual ~SlotProtocol() = default;

  /// Called at the start of each local slot; true means beep, false listen.
  virtual bool beep_now(Slot local_slot) = 0;

  /// Feedback for the slot just played. `heard` is always false after a beep.
  virtual void end_slot(Slot local_slot, bool heard) = 0;
};

/// Harness-side factory. The id is for seeding and bookkeeping only.
using SlotProtocolFactory = std::function<std::unique_ptr<SlotProtocol>(NodeId)>;

enum class SlotEvent : std::uint8_t { Asleep, Beeped, Heard, Silence };

class DiscreteEngine {
 public:
  DiscreteEngine(Topology topology, Slot slots_per_period, const WakeupSchedule& wake,
                 SlotProtocolFactory factory, std::vector<DynamicEvent> events = {});

  /// Plays one global slot and returns what every node experienced.
  const std::vector<SlotEvent>& step_slot();

  /// Steps until the global slot counter reaches the next period boundary.
  void run_period();

  /// (global_slot - wake_slot) mod Q. Throws std::logic_error for a node
  /// that is asleep at that slot.
  [[nodiscard]] Slot local_phase(NodeId v, std::uint64_t global_slot) const;

  [[nodiscard]] std::uint64_t global_slot() const noexcept { return slot_; }
  [[nodiscard]] std::uint64_t global_period() const noexcept { return slot_ / static_cast<std::uint64_t>(q_); }
  [[nodiscard]] Slot slots_per_period() const noexcept { return q_; }
  [[nodiscard]] const Topology& topology() const noexcept { return topo_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

  [[nodiscard]] bool awake(NodeId v) const { return nodes_.at(v).awake; }
  [[nodiscard]] bool removed(NodeId v) const { return !topo_.active(v); }
  [[nodiscard]] std::uint64_t wake_slot(NodeId v) const { return nodes_.at(v).wake_slot; }
  /// Clock offset of v in slots: wake_slot mod Q.
  [[nodiscard]] Slot clock_offset(NodeId v) const;

  [[nodiscard]] SlotProtocol& protocol(NodeId v) { return *nodes_.at(v).protocol; }
  [[nodiscard]] const SlotProtocol& protocol(NodeId v) const { return *nodes_.at(v).protocol; }

  template <typename P>
  [[nodiscard]] P& protocol_as(NodeId v) {
    return static_cast<P&>(protocol(v));
  }
  template <typename P>
  [[nodiscard]] const P& protocol_as(NodeId v) const {
    return static_cast<const P&>(protocol(v));
  }

  /// Applies every pending event scheduled for `period`. Called automatically
  /// at global period boundaries; exposed for tests.
  void apply_dynamic_events(std::uint64_t period);

 private:
  struct Node {
    std::unique_ptr<SlotProtocol> protocol;
    std::uint64_t wake_slot = 0;
    Slot local = 0;
    bool awake = false;
  };

  Topology topo_;
  Slot q_;
  SlotProtocolFactory factory_;
  std::vector<DynamicEvent> events_;
  std::size_t next_event_ = 0;
  std::vector<Node> nodes_;
  std::uint64_t slot_ = 0;

  std::vector<std::uint8_t> beeping_;
  std::vector<std::uint8_t> hit_;
  std::vector<NodeId> beepers_;
  std::vector<SlotEvent> outcome_;
};

}  // namespace beeps
