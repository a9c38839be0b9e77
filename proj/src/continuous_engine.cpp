#include "beeps/continuous_engine.hpp"

#include <string>

#include "beeps/phase.hpp"

namespace beeps {

ContinuousEngine::ContinuousEngine(Topology topology, double period, const WakeupSchedule& wake,
                                   TimeProtocolFactory factory)
    : topo_(std::move(topology)), period_(period) {
  if (!(period_ > 0.0)) throw ConfigError("period must be positive");
  if (wake.wake.size() != topo_.size()) throw ConfigError("wakeup schedule size does not match topology");
  nodes_.resize(topo_.size());
  beeping_.assign(topo_.size(), 0);
  for (NodeId v = 0; v < topo_.size(); ++v) {
    if (!(wake.wake[v] >= 0.0)) throw ConfigError("wake time of node " + std::to_string(v) + " is negative");
    nodes_[v].wake = wake.wake[v];
    nodes_[v].protocol = factory(v);
    queue_.push({wake.wake[v], EventKind::Wake, v});
  }
}

double ContinuousEngine::local_phase(NodeId v, double t_global) const {
  return wrap(t_global - nodes_.at(v).wake, period_);
}

void ContinuousEngine::schedule(NodeId v, const TimeOp& op, double t) {
  auto& node = nodes_[v];
  if (op.kind == TimeOp::Kind::Beep) {
    node.listening = false;
    queue_.push({t, EventKind::Beep, v});
    return;
  }
  if (!(op.duration >= 0.0)) throw std::invalid_argument("listen duration must be nonnegative");
  node.listening = true;
  node.listen_start = t;
  node.listen_end = t + op.duration;
  node.heard.clear();
  queue_.push({node.listen_end, EventKind::ListenEnd, v});
}

void ContinuousEngine::deliver_beeps(double t, std::span<const NodeId> beepers) {
  beeps_ += beepers.size();
  if (beepers.size() > 1) ties_ += beepers.size() - 1;
  for (NodeId u : beepers) beeping_[u] = 1;
  for (NodeId u : beepers) {
    for (NodeId w : topo_.neighbors(u)) {
      auto& node = nodes_[w];
      if (beeping_[w] || !node.listening) continue;
      if (node.listen_start <= t && t < node.listen_end) node.heard.push_back(t - node.wake);
    }
  }
  for (NodeId u : beepers) beeping_[u] = 0;
}

void ContinuousEngine::run_until(double t_global) {
  std::vector<NodeId> beepers;
  while (!queue_.empty() && queue_.top().time < t_global) {
    const double t = queue_.top().time;
    now_ = t;
    // Stage 1: wakeups and window ends at t, including any zero-length
    // listens they spawn.
    while (!queue_.empty() && queue_.top().time == t && queue_.top().kind != EventKind::Beep) {
      const Event ev = queue_.top();
      queue_.pop();
      auto& node = nodes_[ev.node];
      if (ev.kind == EventKind::Wake) {
        schedule(ev.node, node.protocol->start(), t);
      } else {
        node.listening = false;
        const std::vector<double> heard = std::move(node.heard);
        node.heard.clear();
        schedule(ev.node, node.protocol->resume(t - node.wake, heard), t);
      }
    }
    // Stage 2: the batch of beeps at t.
    beepers.clear();
    while (!queue_.empty() && queue_.top().time == t && queue_.top().kind == EventKind::Beep) {
      beepers.push_back(queue_.top().node);
      queue_.pop();
    }
    if (beepers.empty()) continue;
    deliver_beeps(t, beepers);
    for (NodeId u : beepers) {
      auto& node = nodes_[u];
      schedule(u, node.protocol->resume(t - node.wake, {}), t);
    }
  }
  if (t_global > now_) now_ = t_global;
}

}  // namespace beeps
