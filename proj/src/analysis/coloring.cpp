#include "beeps/analysis/coloring.hpp"

#include <set>
#include <string>

namespace beeps::analysis {

const char* label_name(Label label) noexcept {
  switch (label) {
    case Label::Good:
      return "good";
    case Label::BadColored:
      return "bad-colored";
    case Label::BadUncolored:
      return "bad-uncolored";
    case Label::Inactive:
      return "inactive";
  }
  return "?";
}

std::vector<Label> classify_good_bad(const ColoringSnapshot<Slot>& snap, const Topology& topo) {
  std::vector<Label> labels(snap.nodes.size(), Label::Inactive);
  for (NodeId v = 0; v < snap.nodes.size(); ++v) {
    if (!topo.active(v)) continue;
    const auto& nv = snap.nodes[v];
    if (!nv.colored || !nv.has_phase) {
      labels[v] = Label::BadUncolored;
      continue;
    }
    bool clash = false;
    for (NodeId u : topo.neighbors(v)) {
      const auto& nu = snap.nodes[u];
      if (nu.has_phase && circular_distance(nu.phase, nv.phase, snap.period) <= 1) {
        clash = true;
        break;
      }
    }
    labels[v] = clash ? Label::BadColored : Label::Good;
  }
  return labels;
}

VertexColoring hardness_reduction(const std::vector<std::optional<Slot>>& local_phases, const std::vector<Slot>& offsets,
                                  const Topology& topo, Slot slots_per_period) {
  if (local_phases.size() != offsets.size()) throw std::invalid_argument("hardness_reduction: size mismatch");
  VertexColoring out;
  out.colors.assign(local_phases.size(), -1);
  std::set<Slot> used;
  for (NodeId v = 0; v < local_phases.size(); ++v) {
    if (!local_phases[v] || !topo.active(v)) continue;
    out.colors[v] = wrap(*local_phases[v] + offsets[v], slots_per_period);
    used.insert(out.colors[v]);
  }
  for (auto [u, v] : topo.edges()) {
    if (out.colors[u] >= 0 && out.colors[u] == out.colors[v]) {
      throw InconsistentColoring("neighbours " + std::to_string(u) + " and " + std::to_string(v) + " share colour " +
                                 std::to_string(out.colors[u]));
    }
  }
  out.distinct = used.size();
  return out;
}

}  // namespace beeps::analysis
