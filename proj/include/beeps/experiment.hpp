#pragma once

// Single-trial runners that drive an engine, attach the global-knowledge
// checks, and collect per-period trace rows and summary counters.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "beeps/analysis/coloring.hpp"
#include "beeps/config.hpp"
#include "beeps/topology.hpp"

namespace beeps {

/// One CSV row: period,node,phase,jitter,interval,colored,label,beeps_heard.
/// Files prepend a trial column so multi-trial runs stay in one table.
struct TraceRecord {
  std::uint64_t period = 0;
  NodeId node = 0;
  std::optional<double> phase;  // global frame
  std::optional<Slot> jitter;
  double interval = 0.0;
  bool colored = false;
  std::string label;
  std::size_t beeps_heard = 0;
  std::uint32_t degree_estimate = 0;  // not written to CSV
};

inline constexpr const char* kTraceHeader = "trial,period,node,phase,jitter,interval,colored,label,beeps_heard";

/// Writes rows prefixed by the trial index. Doubles use the shortest
/// round-trip representation, so output is byte-stable across runs.
void write_trace_rows(std::ostream& out, std::uint64_t trial, std::span<const TraceRecord> rows);

struct JitterJumpRun {
  Topology topology;
  SimConfig config;  // already resolved
  WakeupSchedule wake;
  std::vector<DynamicEvent> events;
  std::uint64_t settle_periods = 5;
  bool record_trace = false;
};

struct ChurnResponse {
  std::uint64_t event_period = 0;
  std::optional<std::uint64_t> restabilized_after;  // periods until all good again
};

struct JitterJumpOutcome {
  bool converged = false;
  std::uint64_t convergence_period = 0;  // completed periods when first all good
  std::uint64_t periods_run = 0;

  std::uint64_t free_slot_checks = 0;
  std::uint64_t free_slot_violations = 0;  // |F| < (1 - 3 eta) Q, static protocol
  std::uint64_t dynamic_free_slot_shortfalls = 0;  // same test in dynamic mode, informational
  std::uint64_t degree_checks = 0;
  std::uint64_t degree_violations = 0;     // d~ outside [1, max(1, 2d)]
  std::uint64_t persistence_violations = 0;  // good node turned bad, static runs only

  std::uint64_t all_good_snapshots = 0;
  std::uint64_t coloring_violations = 0;
  std::uint64_t interval_floor_violations = 0;  // I (2 dmax + 1) < eta Q
  std::uint64_t hardness_violations = 0;
  std::optional<double> min_normalized_interval;

  std::uint64_t degree_windows = 0;  // dynamic: full windows evaluated
  std::uint64_t resets = 0;

  std::vector<ChurnResponse> churn;
  std::string protocol_error;
  std::vector<TraceRecord> trace;
  analysis::ColoringSnapshot<Slot> final_snapshot;
  std::vector<analysis::Label> final_labels;

  [[nodiscard]] bool clean() const noexcept {
    return protocol_error.empty() && free_slot_violations == 0 && degree_violations == 0 &&
           persistence_violations == 0 && coloring_violations == 0 && interval_floor_violations == 0 &&
           hardness_violations == 0;
  }
};

JitterJumpOutcome run_jitterjump(const JitterJumpRun& run);

struct BeepFirstRun {
  Topology topology;
  SimConfig config;  // already resolved
  WakeupSchedule wake;
  bool record_trace = false;
};

struct BeepFirstOutcome {
  bool all_stable = false;
  double max_stabilization_periods = 0.0;  // max over nodes of (stable time - wake) / T
  double max_search_periods = 0.0;         // max over nodes of search duration / T
  std::uint64_t overruns = 0;
  std::uint64_t ties = 0;          // equal-time beep collisions in the engine
  std::uint64_t phase_ties = 0;    // neighbours with identical global phase
  std::uint64_t coloring_violations = 0;
  std::uint64_t interval_mismatches = 0;
  std::uint64_t periods_run = 0;
  std::string protocol_error;
  std::vector<TraceRecord> trace;
  analysis::ColoringSnapshot<double> final_snapshot;

  [[nodiscard]] bool clean() const noexcept {
    return all_stable && protocol_error.empty() && overruns == 0 && phase_ties == 0 && coloring_violations == 0 &&
           interval_mismatches == 0;
  }
};

BeepFirstOutcome run_beepfirst(const BeepFirstRun& run);

/// Two adjacent colored slotted nodes whose beeps met at slot x last period.
/// `setup` 0..3 picks the nominal phases (x, x), (x-1, x-1), (x, x-1) or
/// (x-1, x). Plays one period from fresh randomness and reports whether both
/// nodes ended it uncolored.
bool collision_escape_trial(int setup, std::uint64_t seed, Slot slots_per_period = 256, double eta = 1.0 / 16.0);

/// Runs fn(0..count-1) on up to `workers` threads and returns results by index.
template <typename R>
std::vector<R> run_trials(std::uint64_t count, unsigned workers, const std::function<R(std::uint64_t)>& fn);

}  // namespace beeps

#include "beeps/detail/run_trials.hpp"
