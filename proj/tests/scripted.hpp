#pragma once

// Test doubles: protocols that follow a fixed script and record feedback.

#include <set>
#include <vector>

#include "beeps/continuous_engine.hpp"
#include "beeps/discrete_engine.hpp"

namespace beeps::testing {

/// Beeps at the listed local slots of every period and logs what it heard.
class ScriptedSlotNode final : public SlotProtocol {
 public:
  explicit ScriptedSlotNode(std::set<Slot> beeps) : beeps_(std::move(beeps)) {}

  bool beep_now(Slot local_slot) override { return beeps_.count(local_slot) > 0; }
  void end_slot(Slot local_slot, bool heard) override {
    ++slots_played;
    if (heard) heard_at.push_back(local_slot);
  }

  std::vector<Slot> heard_at;
  std::size_t slots_played = 0;

 private:
  std::set<Slot> beeps_;
};

/// Plays a fixed list of operations, then listens forever.
class ScriptedTimeNode final : public TimeProtocol {
 public:
  explicit ScriptedTimeNode(std::vector<TimeOp> ops) : ops_(std::move(ops)) {}

  TimeOp start() override { return next(); }
  TimeOp resume(double now, std::span<const double> heard) override {
    finished_at.push_back(now);
    for (double h : heard) heard_at.push_back(h);
    return next();
  }

  std::vector<double> heard_at;
  std::vector<double> finished_at;

 private:
  TimeOp next() { return i_ < ops_.size() ? ops_[i_++] : TimeOp::listen(1e9); }

  std::vector<TimeOp> ops_;
  std::size_t i_ = 0;
};

}  // namespace beeps::testing
