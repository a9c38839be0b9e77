#include "beeps/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "beeps/beepfirst.hpp"
#include "beeps/continuous_engine.hpp"
#include "beeps/discrete_engine.hpp"
#include "beeps/jitterjump.hpp"
#include "beeps/rng.hpp"

namespace beeps {

namespace {

void put_double(std::ostream& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.write(buf, res.ptr - buf);
}

const char* stage_name(BeepFirstStage s) {
  switch (s) {
    case BeepFirstStage::Init: return "init";
    case BeepFirstStage::Listening: return "listening";
    case BeepFirstStage::Searching: return "searching";
    case BeepFirstStage::Stable: return "stable";
  }
  return "?";
}

}  // namespace

void write_trace_rows(std::ostream& out, std::uint64_t trial, std::span<const TraceRecord> rows) {
  for (const auto& r : rows) {
    out << trial << ',' << r.period << ',' << r.node << ',';
    if (r.phase) put_double(out, *r.phase);
    out << ',';
    if (r.jitter) out << *r.jitter;
    out << ',';
    put_double(out, r.interval);
    out << ',' << (r.colored ? 1 : 0) << ',' << r.label << ',' << r.beeps_heard << '\n';
  }
}

JitterJumpOutcome run_jitterjump(const JitterJumpRun& run) {
  const SimConfig& cfg = run.config;
  const Slot q = cfg.slots_per_period;
  const JitterJumpParams params{q, cfg.eta, cfg.dynamic, cfg.window};
  const bool is_static = !cfg.dynamic && run.events.empty();
  const double free_floor = (1.0 - 3.0 * cfg.eta) * static_cast<double>(q);
  const double interval_floor = cfg.eta * static_cast<double>(q);

  JitterJumpOutcome out;
  DiscreteEngine* engine_ptr = nullptr;

  auto factory = [&](NodeId v) -> std::unique_ptr<SlotProtocol> {
    auto node = std::make_unique<JitterJumpNode>(params, Rng(derive_seed(cfg.master_seed, v, Stream::Protocol)));
    node->set_observer([&out, &engine_ptr, &cfg, v, is_static, free_floor](const PeriodReport& rep) {
      if (rep.free_slots) {
        // Second beeps double |S| in dynamic mode, so the floor only binds
        // the static protocol.
        const bool short_of_floor = static_cast<double>(*rep.free_slots) < free_floor;
        if (cfg.dynamic) {
          if (short_of_floor) ++out.dynamic_free_slot_shortfalls;
        } else {
          ++out.free_slot_checks;
          if (short_of_floor) ++out.free_slot_violations;
        }
      }
      if (is_static) {
        ++out.degree_checks;
        const auto d = static_cast<std::uint32_t>(engine_ptr->topology().degree(v));
        if (rep.degree_estimate < 1 || rep.degree_estimate > std::max<std::uint32_t>(1, 2 * d)) {
          ++out.degree_violations;
        }
      }
      if (cfg.dynamic && rep.local_period >= cfg.window) {
        ++out.degree_windows;
        if (rep.reset) ++out.resets;
      }
    });
    return node;
  };

  DiscreteEngine engine(run.topology, q, run.wake, factory, run.events);
  engine_ptr = &engine;

  std::set<std::uint64_t> event_periods;
  for (const auto& e : run.events) event_periods.insert(e.at_period);
  const std::uint64_t last_event = event_periods.empty() ? 0 : *event_periods.rbegin();
  for (auto p : event_periods) out.churn.push_back({p, std::nullopt});
  // After churn, run long enough for a full degree window and a settled streak.
  const std::uint64_t quiet_from =
      event_periods.empty() ? 0 : last_event + std::max<std::uint64_t>(cfg.window, run.settle_periods);

  std::vector<analysis::Label> previous;
  std::uint64_t good_streak = 0;

  while (engine.global_period() < cfg.max_periods) {
    try {
      engine.run_period();
    } catch (const ProtocolViolation& e) {
      out.protocol_error = e.what();
      break;
    }
    const std::uint64_t done = engine.global_period();
    const Topology& topo = engine.topology();

    analysis::ColoringSnapshot<Slot> snap{q, {}};
    snap.nodes.resize(engine.size());
    std::vector<std::optional<Slot>> local_phases(engine.size());
    std::vector<Slot> offsets(engine.size(), 0);
    for (NodeId v = 0; v < engine.size(); ++v) {
      if (engine.removed(v) || !engine.awake(v)) continue;
      const auto& st = engine.protocol_as<JitterJumpNode>(v).state();
      offsets[v] = engine.clock_offset(v);
      auto& nc = snap.nodes[v];
      nc.interval = st.interval;
      nc.colored = st.colored;
      if (!st.listening_only && st.has_phase) {
        nc.has_phase = true;
        nc.phase = wrap(st.phase + offsets[v], q);
        local_phases[v] = st.phase;
      }
    }
    auto labels = analysis::classify_good_bad(snap, topo);

    bool all_good = true;
    for (NodeId v = 0; v < labels.size(); ++v) {
      if (labels[v] != analysis::Label::Good && labels[v] != analysis::Label::Inactive) all_good = false;
    }

    if (is_static && previous.size() == labels.size()) {
      for (NodeId v = 0; v < labels.size(); ++v) {
        if (previous[v] == analysis::Label::Good && labels[v] != analysis::Label::Good) ++out.persistence_violations;
      }
    }

    if (run.record_trace) {
      for (NodeId v = 0; v < engine.size(); ++v) {
        if (engine.removed(v) || !engine.awake(v)) continue;
        const auto& st = engine.protocol_as<JitterJumpNode>(v).state();
        TraceRecord r;
        r.period = done - 1;
        r.node = v;
        if (snap.nodes[v].has_phase) {
          r.phase = static_cast<double>(snap.nodes[v].phase);
          r.jitter = st.jitter;
        }
        r.interval = static_cast<double>(st.interval);
        r.colored = st.colored;
        r.label = analysis::label_name(labels[v]);
        r.beeps_heard = st.heard.size();
        r.degree_estimate = st.degree_estimate;
        out.trace.push_back(std::move(r));
      }
    }

    if (all_good) ++good_streak;
    else good_streak = 0;
    // With offset clocks a node's last local period can predate a
    // neighbour's final jump, so its I_v is only current two periods on.
    bool aligned = true;
    for (NodeId v = 0; v < engine.size(); ++v) {
      if (topo.active(v) && engine.clock_offset(v) != engine.clock_offset(0)) aligned = false;
    }
    if (all_good && (aligned || good_streak >= 3)) {
      ++out.all_good_snapshots;
      const auto report = analysis::validate_interval_coloring(snap, topo, cfg.eta);
      out.coloring_violations += report.violations.size();
      if (report.min_normalized_interval) {
        out.min_normalized_interval = out.min_normalized_interval
                                          ? std::min(*out.min_normalized_interval, *report.min_normalized_interval)
                                          : *report.min_normalized_interval;
      }
      for (NodeId v = 0; v < engine.size(); ++v) {
        if (!topo.active(v) || !snap.nodes[v].has_phase) continue;
        const double width = 2.0 * static_cast<double>(topo.neighborhood_max_degree(v)) + 1.0;
        if (static_cast<double>(snap.nodes[v].interval) * width < interval_floor) ++out.interval_floor_violations;
      }
      try {
        const auto coloring = analysis::hardness_reduction(local_phases, offsets, topo, q);
        if (coloring.distinct > static_cast<std::size_t>(q)) ++out.hardness_violations;
      } catch (const analysis::InconsistentColoring&) {
        ++out.hardness_violations;
      }
    }
    if (all_good) {
      if (!out.converged) {
        out.converged = true;
        out.convergence_period = done;
      }
      for (auto& c : out.churn) {
        if (!c.restabilized_after && done > c.event_period) c.restabilized_after = done - c.event_period;
      }
    }

    previous = std::move(labels);
    out.final_labels = previous;
    out.final_snapshot = std::move(snap);
    out.periods_run = done;
    if (out.converged && done > quiet_from && good_streak > run.settle_periods) break;
  }
  return out;
}

bool collision_escape_trial(int setup, std::uint64_t seed, Slot slots_per_period, double eta) {
  if (setup < 0 || setup > 3) throw std::invalid_argument("collision setup must be 0..3");
  const Slot q = slots_per_period;
  const Slot x = q / 2;
  const Slot pu = (setup == 1 || setup == 3) ? x - 1 : x;
  const Slot pv = (setup == 1 || setup == 2) ? x - 1 : x;
  const JitterJumpParams params{q, eta, false, 1};

  auto state_for = [&](Slot phase) {
    JitterJumpState st;
    st.listening_only = false;
    st.colored = true;
    st.has_phase = true;
    st.phase = phase;
    st.degree_estimate = 1;
    st.buffer = buffer_length(eta, q, 1);
    st.local_period = 1;
    st.heard = SlotSet(q);
    return st;
  };
  Topology g(2);
  g.add_edge(0, 1);
  auto factory = [&](NodeId v) -> std::unique_ptr<SlotProtocol> {
    return std::make_unique<JitterJumpNode>(params, Rng(derive_seed(seed, v, Stream::Protocol)),
                                            state_for(v == 0 ? pu : pv));
  };
  DiscreteEngine engine(g, q, WakeupSchedule::simultaneous(2), factory);
  engine.run_period();
  return !engine.protocol_as<JitterJumpNode>(0).state().colored && !engine.protocol_as<JitterJumpNode>(1).state().colored;
}

BeepFirstOutcome run_beepfirst(const BeepFirstRun& run) {
  const SimConfig& cfg = run.config;
  const double period = cfg.period;
  const Topology& topo = run.topology;

  auto factory = [&](NodeId v) -> std::unique_ptr<TimeProtocol> {
    const BeepFirstParams params{period, cfg.epsilon, static_cast<std::uint32_t>(topo.degree(v)),
                                 static_cast<std::uint32_t>(topo.neighborhood_max_degree(v)), cfg.delayed_interval};
    return std::make_unique<BeepFirstNode>(params, Rng(derive_seed(cfg.master_seed, v, Stream::Protocol)));
  };
  ContinuousEngine engine(topo, period, run.wake, factory);
  const std::size_t n = topo.size();

  BeepFirstOutcome out;
  double max_wake = 0.0;
  for (double w : run.wake.wake) max_wake = std::max(max_wake, w);

  for (std::uint64_t k = 1; k <= cfg.max_periods; ++k) {
    try {
      engine.run_until(static_cast<double>(k) * period);
    } catch (const SearchOverrun& e) {
      ++out.overruns;
      out.protocol_error = e.what();
      break;
    }
    out.periods_run = k;
    bool all = true;
    for (NodeId v = 0; v < n; ++v) {
      const auto& node = engine.protocol_as<BeepFirstNode>(v);
      const auto& st = node.state();
      const bool stable = st.stage == BeepFirstStage::Stable;
      all = all && stable;
      if (run.record_trace) {
        TraceRecord r;
        r.period = k - 1;
        r.node = v;
        if (stable) r.phase = wrap(engine.wake_time(v) + node.origin() + st.phase, period);
        r.interval = st.interval;
        r.colored = stable;
        r.label = stage_name(st.stage);
        r.beeps_heard = st.heard.size();
        out.trace.push_back(std::move(r));
      }
    }
    if (all && static_cast<double>(k) * period > max_wake) {
      out.all_stable = true;
      break;
    }
  }
  out.ties = engine.tie_count();

  analysis::ColoringSnapshot<double> snap{period, {}};
  snap.nodes.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto& node = engine.protocol_as<BeepFirstNode>(v);
    const auto& st = node.state();
    if (st.stage != BeepFirstStage::Stable || !st.stable_at) continue;
    out.max_stabilization_periods = std::max(out.max_stabilization_periods, *st.stable_at / period);
    out.max_search_periods = std::max(out.max_search_periods, (*st.stable_at - st.search_started) / period);
    auto& nc = snap.nodes[v];
    nc.has_phase = true;
    nc.colored = true;
    nc.phase = wrap(engine.wake_time(v) + node.origin() + st.phase, period);
    nc.interval = st.interval;
    if (!cfg.delayed_interval &&
        st.interval != beepfirst_interval(period, cfg.epsilon, static_cast<std::uint32_t>(topo.neighborhood_max_degree(v)))) {
      ++out.interval_mismatches;
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : topo.neighbors(u)) {
      if (v > u && snap.nodes[u].has_phase && snap.nodes[v].has_phase && snap.nodes[u].phase == snap.nodes[v].phase) {
        ++out.phase_ties;
      }
    }
  }
  const auto report = analysis::validate_interval_coloring(snap, topo);
  out.coloring_violations = report.violations.size();
  out.final_snapshot = std::move(snap);
  return out;
}

}  // namespace beeps
