#pragma once

// Jitter-and-jump interval coloring for the slotted beeping model.
//
// A node listens silently for its first period and estimates its degree from
// the number of distinct beeps heard. From then on it beeps once per period
// at its nominal phase plus a random jitter of 0 or 1 slot. An uncolored node
// jumps every period to a random free slot (one with no heard beep within a
// guard window); it becomes colored once a period passes with no beep within
// its buffer, and drops back to uncolored when it hears a beep right next to
// its own.
//
// Dynamic mode adds a second beep per period at a fresh random free slot and
// a moving-window degree estimate that can shrink, uncoloring the node when
// its neighbourhood collapses.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beeps/discrete_engine.hpp"
#include "beeps/phase.hpp"
#include "beeps/rng.hpp"

namespace beeps {

/// A node observed a state the protocol's invariants rule out.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JitterJumpParams {
  Slot slots_per_period = 0;
  double eta = 1.0 / 16.0;
  bool dynamic = false;
  std::uint32_t window = 1;  // r, dynamic mode only
};

/// floor(eta * Q / (d + 1)), never below one slot.
Slot buffer_length(double eta, Slot slots_per_period, std::uint32_t degree_estimate);

/// Slots p whose guard window [p - b - 2, p + b + 1] holds no element of
/// heard ∪ {own_phase}. Ascending order.
std::vector<Slot> free_slots(const SlotSet& heard, std::optional<Slot> own_phase, Slot buffer);

/// max s in [0, Q-1] with heard[phase - s, phase] empty; 0 when a beep sits on phase.
Slot measure_interval(const SlotSet& heard, Slot phase);

/// Emitted at the end of each local period.
struct PeriodReport {
  std::uint64_t local_period = 0;  // 0 is the listen-only period
  std::size_t beeps_heard = 0;
  std::optional<std::size_t> free_slots;  // |F_v| if computed at this period's start
  std::uint32_t degree_estimate = 1;
  Slot buffer = 1;
  Slot interval = 0;
  bool colored = false;
  bool reset = false;  // dynamic-mode degree collapse
};

/// Everything the protocol can observe about itself. Equality is what the
/// twin-coupling experiment calls "identical state".
struct JitterJumpState {
  bool listening_only = true;
  bool colored = false;
  bool has_phase = false;
  Slot phase = 0;
  Slot jitter = 0;
  Slot beep_slot = -1;
  std::uint32_t degree_estimate = 1;
  Slot buffer = 1;
  Slot interval = 0;
  std::uint64_t local_period = 0;
  SlotSet heard{1};               // S from the last completed period
  std::vector<Slot> hearing;      // beeps of the period in progress

  bool has_second = false;
  Slot second_phase = 0;
  std::vector<std::uint32_t> window;  // last r beep counts, oldest first

  bool operator==(const JitterJumpState&) const = default;
};

class JitterJumpNode final : public SlotProtocol {
 public:
  using Observer = std::function<void(const PeriodReport&)>;

  JitterJumpNode(const JitterJumpParams& params, Rng rng);

  /// Starts from an arbitrary mid-run state (engineered experiments).
  JitterJumpNode(const JitterJumpParams& params, Rng rng, JitterJumpState state);

  bool beep_now(Slot local_slot) override;
  void end_slot(Slot local_slot, bool heard) override;

  void set_observer(Observer observer) { observer_ = std::move(observer); }

  [[nodiscard]] const JitterJumpState& state() const noexcept { return state_; }
  [[nodiscard]] const JitterJumpParams& params() const noexcept { return params_; }
  [[nodiscard]] const Rng& rng() const noexcept { return rng_; }

 private:
  void begin_period();
  void end_period();

  JitterJumpParams params_;
  Rng rng_;
  JitterJumpState state_;
  std::optional<std::size_t> last_free_count_;
  Observer observer_;
};

}  // namespace beeps
