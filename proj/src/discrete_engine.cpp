#include "beeps/discrete_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beeps {

DiscreteEngine::DiscreteEngine(Topology topology, Slot slots_per_period, const WakeupSchedule& wake,
                               SlotProtocolFactory factory, std::vector<DynamicEvent> events)
    : topo_(std::move(topology)), q_(slots_per_period), factory_(std::move(factory)), events_(std::move(events)) {
  if (q_ <= 0) throw ConfigError("slots per period must be positive");
  if (wake.wake.size() != topo_.size()) throw ConfigError("wakeup schedule size does not match topology");
  nodes_.resize(topo_.size());
  for (NodeId v = 0; v < topo_.size(); ++v) {
    const double w = wake.wake[v];
    if (!(w >= 0.0) || w != std::floor(w)) throw ConfigError("wake slot of node " + std::to_string(v) + " is not a slot");
    nodes_[v].wake_slot = static_cast<std::uint64_t>(w);
    nodes_[v].protocol = factory_(v);
  }
  for (std::size_t i = 1; i < events_.size(); ++i) {
    if (events_[i].at_period < events_[i - 1].at_period) throw ConfigError("dynamic events must be sorted by period");
  }
}

Slot DiscreteEngine::clock_offset(NodeId v) const {
  return static_cast<Slot>(nodes_.at(v).wake_slot % static_cast<std::uint64_t>(q_));
}

Slot DiscreteEngine::local_phase(NodeId v, std::uint64_t global_slot) const {
  const auto& node = nodes_.at(v);
  if (global_slot < node.wake_slot) throw std::logic_error("local_phase queried for a sleeping node");
  return static_cast<Slot>((global_slot - node.wake_slot) % static_cast<std::uint64_t>(q_));
}

void DiscreteEngine::apply_dynamic_events(std::uint64_t period) {
  while (next_event_ < events_.size() && events_[next_event_].at_period <= period) {
    const auto& ev = events_[next_event_++];
    const NodeId touched = apply_event(topo_, ev);
    if (ev.kind == DynamicEvent::Kind::AddNode) {
      Node node;
      node.wake_slot = period * static_cast<std::uint64_t>(q_);
      node.protocol = factory_(touched);
      nodes_.push_back(std::move(node));
    } else if (ev.kind == DynamicEvent::Kind::RemoveNode) {
      nodes_[touched].awake = false;
    }
  }
}

const std::vector<SlotEvent>& DiscreteEngine::step_slot() {
  if (slot_ % static_cast<std::uint64_t>(q_) == 0) apply_dynamic_events(global_period());

  const std::size_t n = nodes_.size();
  beeping_.assign(n, 0);
  hit_.assign(n, 0);
  outcome_.assign(n, SlotEvent::Asleep);
  beepers_.clear();

  for (NodeId v = 0; v < n; ++v) {
    auto& node = nodes_[v];
    if (!topo_.active(v)) continue;
    if (!node.awake) {
      if (node.wake_slot != slot_) continue;
      node.awake = true;
      node.local = 0;
    }
    if (node.protocol->beep_now(node.local)) {
      beeping_[v] = 1;
      beepers_.push_back(v);
    }
  }
  for (NodeId u : beepers_) {
    for (NodeId w : topo_.neighbors(u)) hit_[w] = 1;
  }
  for (NodeId v = 0; v < n; ++v) {
    auto& node = nodes_[v];
    if (!node.awake || !topo_.active(v)) continue;
    if (beeping_[v]) {
      outcome_[v] = SlotEvent::Beeped;
      node.protocol->end_slot(node.local, false);
    } else {
      const bool heard = hit_[v] != 0;
      outcome_[v] = heard ? SlotEvent::Heard : SlotEvent::Silence;
      node.protocol->end_slot(node.local, heard);
    }
    if (++node.local == q_) node.local = 0;
  }
  ++slot_;
  return outcome_;
}

void DiscreteEngine::run_period() {
  do {
    step_slot();
  } while (slot_ % static_cast<std::uint64_t>(q_) != 0);
}

}  // namespace beeps
