#pragma once

// Event-driven engine for the continuous beeping model.
//
// Beeps are instantaneous. A beep at global time t reaches every neighbour
// whose current listen window [start, end) contains t and which is not itself
// beeping at t. Events at equal times are processed in two stages: window
// ends and wakeups first (so a window ending at t has already been replaced
// by its successor), then the batch of beeps at t.

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <span>
#include <vector>

#include "beeps/topology.hpp"

namespace beeps {

struct TimeOp {
  enum class Kind { Listen, Beep };
  Kind kind = Kind::Listen;
  double duration = 0.0;  // Listen only

  static TimeOp listen(double d) { return {Kind::Listen, d}; }
  static TimeOp beep() { return {Kind::Beep, 0.0}; }
};

/// Node-local protocol for the continuous engine. Times handed to the
/// protocol are on the node's local clock (global time minus wake time).
class TimeProtocol {
 public:
  virtual ~TimeProtocol() = default;

  /// First operation, issued at the wake instant.
  virtual TimeOp start() = 0;

  /// The previous operation finished at local time `now`. For a listen,
  /// `heard` holds the local times of every beep delivered during it.
  virtual TimeOp resume(double now, std::span<const double> heard) = 0;
};

using TimeProtocolFactory = std::function<std::unique_ptr<TimeProtocol>(NodeId)>;

class ContinuousEngine {
 public:
  ContinuousEngine(Topology topology, double period, const WakeupSchedule& wake, TimeProtocolFactory factory);

  /// Processes every event strictly before `t_global`.
  void run_until(double t_global);

  [[nodiscard]] double now() const noexcept { return now_; }
  [[nodiscard]] double period() const noexcept { return period_; }
  [[nodiscard]] const Topology& topology() const noexcept { return topo_; }
  [[nodiscard]] double wake_time(NodeId v) const { return nodes_.at(v).wake; }
  /// (t_global - wake) mod T.
  [[nodiscard]] double local_phase(NodeId v, double t_global) const;

  /// Number of extra beeps that landed on an exactly equal time as another
  /// beep. Zero in the ideal model.
  [[nodiscard]] std::uint64_t tie_count() const noexcept { return ties_; }
  [[nodiscard]] std::uint64_t beeps_emitted() const noexcept { return beeps_; }

  [[nodiscard]] TimeProtocol& protocol(NodeId v) { return *nodes_.at(v).protocol; }
  template <typename P>
  [[nodiscard]] P& protocol_as(NodeId v) {
    return static_cast<P&>(protocol(v));
  }

 private:
  enum class EventKind : std::uint8_t { Wake = 0, ListenEnd = 1, Beep = 2 };

  struct Event {
    double time;
    EventKind kind;
    NodeId node;
    // Min-heap order: time, then stage (beeps last), then node id.
    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      const bool beep = kind == EventKind::Beep, obeep = o.kind == EventKind::Beep;
      if (beep != obeep) return beep;
      if (node != o.node) return node > o.node;
      return kind > o.kind;
    }
  };

  struct Node {
    std::unique_ptr<TimeProtocol> protocol;
    double wake = 0.0;
    bool listening = false;
    double listen_start = 0.0;
    double listen_end = 0.0;
    std::vector<double> heard;
  };

  void schedule(NodeId v, const TimeOp& op, double t);
  void deliver_beeps(double t, std::span<const NodeId> beepers);

  Topology topo_;
  double period_;
  std::vector<Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  double now_ = 0.0;
  std::uint64_t ties_ = 0;
  std::uint64_t beeps_ = 0;
  std::vector<std::uint8_t> beeping_;
};

}  // namespace beeps
