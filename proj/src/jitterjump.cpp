#include "beeps/jitterjump.hpp"

#include <algorithm>
#include <cmath>

#include "beeps/kernels.hpp"

namespace beeps {

Slot buffer_length(double eta, Slot slots_per_period, std::uint32_t degree_estimate) {
  const double raw = eta * static_cast<double>(slots_per_period) / (static_cast<double>(degree_estimate) + 1.0);
  return std::max<Slot>(1, static_cast<Slot>(std::floor(raw)));
}

std::vector<Slot> free_slots(const SlotSet& heard, std::optional<Slot> own_phase, Slot buffer) {
  const Slot q = heard.period();
  const Slot window = 2 * buffer + 4;
  const bool occupied = !heard.empty() || own_phase.has_value();
  std::vector<Slot> out;
  if (window >= q) {
    // Every guard window spans the whole period.
    if (!occupied) {
      out.resize(static_cast<std::size_t>(q));
      for (Slot p = 0; p < q; ++p) out[static_cast<std::size_t>(p)] = p;
    }
    return out;
  }

  // Occupancy repeated three times so every window [p+Q-b-2, p+Q+b+1] is contiguous.
  const auto uq = static_cast<std::size_t>(q);
  std::vector<std::int32_t> occupancy(3 * uq, 0);
  auto mark = [&](Slot s) {
    const auto i = static_cast<std::size_t>(s);
    occupancy[i] = occupancy[i + uq] = occupancy[i + 2 * uq] = 1;
  };
  for (Slot s : heard) mark(s);
  if (own_phase) mark(*own_phase);

  std::vector<std::int32_t> prefix(3 * uq + 1, 0);
  for (std::size_t i = 0; i < 3 * uq; ++i) prefix[i + 1] = prefix[i] + occupancy[i];

  const auto lo = static_cast<std::size_t>(q - buffer - 2);
  const auto hi = static_cast<std::size_t>(q + buffer + 2);
  std::vector<std::uint32_t> hits(uq);
  const std::size_t count = kernels::zero_windows(prefix, uq, lo, hi, hits);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<Slot>(hits[i]));
  return out;
}

Slot measure_interval(const SlotSet& heard, Slot phase) {
  const Slot q = heard.period();
  const auto before = heard.at_or_before(phase);
  if (!before) return q - 1;
  const Slot dist = forward_distance(*before, phase, q);
  return dist == 0 ? 0 : std::min(dist - 1, q - 1);
}

JitterJumpNode::JitterJumpNode(const JitterJumpParams& params, Rng rng) : params_(params), rng_(rng) {
  if (params_.slots_per_period <= 0) throw std::invalid_argument("JitterJumpNode: Q must be positive");
  if (params_.dynamic && params_.window == 0) throw std::invalid_argument("JitterJumpNode: window must be positive");
  state_.heard = SlotSet(params_.slots_per_period);
}

JitterJumpNode::JitterJumpNode(const JitterJumpParams& params, Rng rng, JitterJumpState state)
    : JitterJumpNode(params, rng) {
  if (state.heard.period() != params_.slots_per_period) throw std::invalid_argument("JitterJumpNode: state period mismatch");
  state_ = std::move(state);
}

bool JitterJumpNode::beep_now(Slot local_slot) {
  if (local_slot == 0) begin_period();
  if (state_.listening_only) return false;
  return local_slot == state_.beep_slot || (state_.has_second && local_slot == state_.second_phase);
}

void JitterJumpNode::end_slot(Slot local_slot, bool heard) {
  if (heard) state_.hearing.push_back(local_slot);
  if (local_slot == params_.slots_per_period - 1) end_period();
}

void JitterJumpNode::begin_period() {
  last_free_count_.reset();
  state_.hearing.clear();
  if (state_.listening_only) {
    state_.beep_slot = -1;
    return;
  }
  const Slot q = params_.slots_per_period;
  if (!state_.colored || params_.dynamic) {
    const auto own = state_.has_phase ? std::optional<Slot>(state_.phase) : std::nullopt;
    const auto free = free_slots(state_.heard, own, state_.buffer);
    last_free_count_ = free.size();
    if (free.empty()) throw ProtocolViolation("no free slot available");
    if (!state_.colored) {
      state_.phase = free[rng_.below(free.size())];
      state_.has_phase = true;
    }
    if (params_.dynamic) {
      state_.second_phase = free[rng_.below(free.size())];
      state_.has_second = true;
    }
  }
  state_.jitter = static_cast<Slot>(rng_.below(2));
  // A jittered beep past the period end wraps to slot 0.
  state_.beep_slot = (state_.phase + state_.jitter) % q;
}

void JitterJumpNode::end_period() {
  const Slot q = params_.slots_per_period;
  SlotSet heard(q);
  for (Slot s : state_.hearing) heard.push_back_sorted(s);
  state_.hearing.clear();
  const auto count = static_cast<std::uint32_t>(heard.size());

  PeriodReport report;
  report.local_period = state_.local_period;
  report.beeps_heard = count;
  report.free_slots = last_free_count_;

  if (state_.listening_only) {
    state_.listening_only = false;
    state_.colored = false;
    state_.degree_estimate = std::max<std::uint32_t>(count, 1);
    if (params_.dynamic) state_.window.push_back(count);
  } else {
    state_.interval = measure_interval(heard, state_.phase);
    bool reset = false;
    if (params_.dynamic) {
      state_.window.push_back(count);
      if (state_.window.size() > params_.window) state_.window.erase(state_.window.begin());
      const std::uint32_t recent_max = *std::max_element(state_.window.begin(), state_.window.end());
      state_.degree_estimate = std::max(state_.degree_estimate, recent_max);
      if (16.0 * recent_max < static_cast<double>(state_.degree_estimate)) {
        reset = true;
        state_.degree_estimate = std::max<std::uint32_t>(recent_max, 1);
      }
    } else {
      state_.degree_estimate = std::max<std::uint32_t>(count, 1);
    }
    state_.buffer = buffer_length(params_.eta, q, state_.degree_estimate);
    const Slot p = state_.phase;
    if (!heard.any_in(p - state_.buffer, p + state_.buffer)) {
      state_.colored = true;
    } else if (heard.any_in(p - 1, p + 2)) {
      state_.colored = false;
    }
    if (reset) state_.colored = false;
    report.reset = reset;
  }
  state_.buffer = buffer_length(params_.eta, q, state_.degree_estimate);
  state_.heard = std::move(heard);

  report.degree_estimate = state_.degree_estimate;
  report.buffer = state_.buffer;
  report.interval = state_.interval;
  report.colored = state_.colored;
  ++state_.local_period;
  if (observer_) observer_(report);
}

}  // namespace beeps
