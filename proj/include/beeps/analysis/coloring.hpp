#pragma once

// Global-knowledge checks over a snapshot of every node's output.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beeps/phase.hpp"
#include "beeps/topology.hpp"

namespace beeps::analysis {

template <typename T>
struct NodeColoring {
  bool has_phase = false;
  T phase{};     // global frame
  T interval{};  // I_v
  bool colored = false;
};

/// Per-node output, phases already shifted into the global frame.
template <typename T>
struct ColoringSnapshot {
  T period{};
  std::vector<NodeColoring<T>> nodes;
};

struct IntervalViolation {
  NodeId u;
  NodeId v;
};

struct ColoringReport {
  std::vector<IntervalViolation> violations;
  std::size_t checked_edges = 0;
  /// min over nodes of I_v (2 d^max(v) + 1) / (eta Q); present when
  /// normalisation parameters were supplied.
  std::optional<double> min_normalized_interval;

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
};

/// Closed arcs [p - I, p] on a circle of length `period` intersect?
template <typename T>
bool intervals_overlap(T pu, T iu, T pv, T iv, T period) {
  const T su = wrap(pu - iu, period);
  const T sv = wrap(pv - iv, period);
  return arc_contains(su, iu, sv, period) || arc_contains(sv, iv, su, period);
}

/// Checks every edge whose endpoints both carry a phase. Inactive nodes are
/// skipped. `eta` > 0 enables the normalised-interval statistic.
template <typename T>
ColoringReport validate_interval_coloring(const ColoringSnapshot<T>& snap, const Topology& topo, double eta = 0.0) {
  ColoringReport report;
  std::optional<double> min_norm;
  for (NodeId u = 0; u < snap.nodes.size(); ++u) {
    if (!topo.active(u)) continue;
    const auto& nu = snap.nodes[u];
    if (!nu.has_phase) continue;
    if (eta > 0.0) {
      const double norm = static_cast<double>(nu.interval) *
                          (2.0 * static_cast<double>(topo.neighborhood_max_degree(u)) + 1.0) /
                          (eta * static_cast<double>(snap.period));
      min_norm = min_norm ? std::min(*min_norm, norm) : norm;
    }
    for (NodeId v : topo.neighbors(u)) {
      if (v <= u) continue;
      const auto& nv = snap.nodes[v];
      if (!nv.has_phase) continue;
      ++report.checked_edges;
      if (intervals_overlap(nu.phase, nu.interval, nv.phase, nv.interval, snap.period)) {
        report.violations.push_back({u, v});
      }
    }
  }
  report.min_normalized_interval = min_norm;
  return report;
}

enum class Label : std::uint8_t { Good, BadColored, BadUncolored, Inactive };

const char* label_name(Label label) noexcept;

/// Good: colored and no neighbour with a phase within distance 1.
std::vector<Label> classify_good_bad(const ColoringSnapshot<Slot>& snap, const Topology& topo);

class InconsistentColoring : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct VertexColoring {
  std::vector<Slot> colors;  // -1 for nodes without a phase
  std::size_t distinct = 0;
};

/// c_v = (p_v + theta_v) mod Q from local phases and clock offsets. Throws
/// InconsistentColoring if two neighbours end up with the same colour.
VertexColoring hardness_reduction(const std::vector<std::optional<Slot>>& local_phases, const std::vector<Slot>& offsets,
                                  const Topology& topo, Slot slots_per_period);

}  // namespace beeps::analysis
