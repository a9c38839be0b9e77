#include "beeps/beepfirst.hpp"

#include <cmath>
#include <limits>

namespace beeps {

double beepfirst_interval(double period, double epsilon, std::uint32_t max_neighbor_degree) {
  return (1.0 - epsilon) * period / (2.0 * (static_cast<double>(max_neighbor_degree) + 1.0));
}

double beepfirst_buffer(double period, double eps_v, std::uint32_t degree) {
  return (1.0 - eps_v) * period / (2.0 * (static_cast<double>(degree) + 1.0));
}

BeepFirstNode::BeepFirstNode(const BeepFirstParams& params, Rng rng) : params_(params), rng_(rng) {
  if (!(params_.epsilon > 0.0 && params_.epsilon < 1.0)) throw std::invalid_argument("BeepFirst: epsilon must lie in (0, 1)");
  if (!(params_.period > 0.0)) throw std::invalid_argument("BeepFirst: period must be positive");
  if (params_.max_neighbor_degree < params_.degree) throw std::invalid_argument("BeepFirst: d^max below d");
  state_.heard = TimeSet(params_.period);
}

double BeepFirstNode::to_phase(double local_time) const { return wrap(local_time - origin(), params_.period); }

TimeOp BeepFirstNode::start() {
  state_.eps_v = rng_.uniform(0.0, params_.epsilon);
  state_.interval = beepfirst_interval(params_.period, params_.epsilon, params_.max_neighbor_degree);
  state_.buffer = beepfirst_buffer(params_.period, state_.eps_v, params_.degree);
  state_.stage = BeepFirstStage::Init;
  next_ = Next::StartListen;
  return TimeOp::listen(state_.eps_v * params_.period);
}

TimeOp BeepFirstNode::search_step(double now) {
  const double period = params_.period;
  const double b = state_.buffer;
  // Closed [p - b, p + b] for the first probe at p = 0; afterwards the range
  // is (anchor, anchor + 2b], which is [p - b, p + b] minus the beep just
  // jumped past. Positions are unwrapped relative to the scan start.
  const double lo = state_.anchor ? *state_.anchor : -b;
  const double hi = state_.anchor ? *state_.anchor + 2.0 * b : b;
  std::optional<double> last;
  for (double q : state_.heard) {
    for (double shift : {-period, 0.0, period}) {
      const double x = q + shift;
      const bool inside = state_.anchor ? (x > lo && x <= hi) : (x >= lo && x <= hi);
      if (inside && (!last || x > *last)) last = x;
    }
  }
  if (!last) {
    state_.stage = BeepFirstStage::Stable;
    state_.stable_at = now;
    if (params_.delayed_interval) {
      double radius = period / 2.0;
      for (double q : state_.heard) radius = std::min(radius, circular_distance(q, state_.phase, period));
      state_.interval = std::nextafter(radius, 0.0);
    }
    next_ = Next::StableListenRest;
    return TimeOp::beep();
  }
  state_.previous = state_.phase;
  state_.anchor = *last;
  state_.phase = *last + b;
  if (state_.phase >= period) {
    throw SearchOverrun("search did not settle within one period");
  }
  return TimeOp::listen(state_.phase - state_.previous);
}

TimeOp BeepFirstNode::resume(double now, std::span<const double> heard) {
  switch (state_.stage) {
    case BeepFirstStage::Init:
      state_.stage = BeepFirstStage::Listening;
      return TimeOp::listen(params_.period);
    case BeepFirstStage::Listening:
      for (double t : heard) state_.heard.insert(to_phase(t));
      state_.stage = BeepFirstStage::Searching;
      state_.search_started = now;
      state_.phase = 0.0;
      state_.anchor.reset();
      return search_step(now);
    case BeepFirstStage::Searching:
      for (double t : heard) state_.heard.insert(to_phase(t));
      return search_step(now);
    case BeepFirstStage::Stable:
      break;
  }
  switch (next_) {
    case Next::StableListenRest:
      ++state_.stable_beeps;
      next_ = Next::StableListenLead;
      return TimeOp::listen(params_.period - state_.phase);
    case Next::StableListenLead:
      next_ = Next::StableBeep;
      return TimeOp::listen(state_.phase);
    case Next::StableBeep:
    case Next::StartListen:
      next_ = Next::StableListenRest;
      return TimeOp::beep();
  }
  return TimeOp::beep();
}

}  // namespace beeps
