#pragma once

// Greedy first-fit interval coloring for the continuous beeping model.
//
// After a randomised start delay eps_v*T the node listens for a full period,
// then scans forward from phase 0 for the first phase p whose buffer
// [p - b, p + b] holds no heard beep, jumping past the last beep in the way
// and listening to the newly covered stretch each time. Once found, it beeps
// at p in every period forever. Knowledge of d(v) and d^max(v) is supplied by
// the harness.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "beeps/continuous_engine.hpp"
#include "beeps/phase.hpp"
#include "beeps/rng.hpp"

namespace beeps {

class SearchOverrun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BeepFirstParams {
  double period = 1.0;
  double epsilon = 0.1;
  std::uint32_t degree = 0;
  std::uint32_t max_neighbor_degree = 0;
  /// Pick I_v at stabilisation as the largest beep-free symmetric radius
  /// around p_v instead of the degree-based formula.
  bool delayed_interval = false;
};

enum class BeepFirstStage { Init, Listening, Searching, Stable };

struct BeepFirstState {
  BeepFirstStage stage = BeepFirstStage::Init;
  double eps_v = 0.0;
  double interval = 0.0;  // I_v
  double buffer = 0.0;    // b_v
  double phase = 0.0;     // p_v, relative to the node's origin wake + eps_v*T
  double previous = 0.0;  // t_v
  TimeSet heard{1.0};     // S
  std::optional<double> anchor;  // last beep jumped past, unwrapped
  std::optional<double> stable_at;  // local time of the first stable beep
  double search_started = 0.0;      // local time the scan began
  std::uint64_t stable_beeps = 0;
};

/// (1 - eps) T / (2 (dmax + 1)).
double beepfirst_interval(double period, double epsilon, std::uint32_t max_neighbor_degree);
/// (1 - eps_v) T / (2 (d + 1)).
double beepfirst_buffer(double period, double eps_v, std::uint32_t degree);

class BeepFirstNode final : public TimeProtocol {
 public:
  BeepFirstNode(const BeepFirstParams& params, Rng rng);

  TimeOp start() override;
  TimeOp resume(double now, std::span<const double> heard) override;

  [[nodiscard]] const BeepFirstState& state() const noexcept { return state_; }
  [[nodiscard]] const BeepFirstParams& params() const noexcept { return params_; }
  /// Local time of the node's period origin (eps_v * T after waking).
  [[nodiscard]] double origin() const noexcept { return state_.eps_v * params_.period; }

 private:
  double to_phase(double local_time) const;
  /// Next search step: a listen extending the scan, or the reserving beep.
  TimeOp search_step(double now);

  BeepFirstParams params_;
  Rng rng_;
  BeepFirstState state_;
  enum class Next { StartListen, StableListenRest, StableListenLead, StableBeep } next_ = Next::StartListen;
};

}  // namespace beeps
