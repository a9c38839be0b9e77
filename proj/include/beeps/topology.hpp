#pragma once

// Undirected communication graphs, generators and the text formats that feed
// them (edge lists, wakeup schedules, dynamic events).

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beeps/rng.hpp"

namespace beeps {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Malformed input file or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Topology {
 public:
  explicit Topology(std::size_t n = 0);

  NodeId add_node();
  void add_edge(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);
  /// Detaches every edge of v and marks it inactive; ids stay stable.
  void remove_node(NodeId v);

  [[nodiscard]] std::size_t size() const noexcept { return adjacency_.size(); }
  [[nodiscard]] std::size_t active_count() const noexcept;
  [[nodiscard]] bool active(NodeId v) const { return active_.at(v) != 0; }
  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const;
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  [[nodiscard]] std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  [[nodiscard]] std::size_t max_degree() const noexcept;
  /// d^max(v): largest degree in the closed neighbourhood of v.
  [[nodiscard]] std::size_t neighborhood_max_degree(NodeId v) const;
  [[nodiscard]] std::size_t edge_count() const noexcept;
  [[nodiscard]] std::vector<Edge> edges() const;

 private:
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::uint8_t> active_;
};

// Generators.
Topology gnp(std::size_t n, double p, Rng& rng);
Topology random_regular(std::size_t n, std::size_t d, Rng& rng);
Topology star(std::size_t n);
Topology clique(std::size_t n);
/// k blocks {a,b,c,d} with a-b, b-c, c-d, a-c, b-d inside each block and
/// d_i - a_{i+1 mod k} between blocks. Node 4i+1 and 4i+2 are twins.
Topology cycle_of_blocks(std::size_t k);

/// Generator spec ("gnp:64:0.1", "regular:64:4", "star:65", "clique:16",
/// "blocks:16") or a path to an edge-list file.
Topology make_graph(std::string_view spec, std::uint64_t seed, std::size_t min_nodes = 0);

/// One "u v" pair per line, 0-based. Blank lines and '#' comments ignored.
Topology parse_edge_list(std::istream& in, std::size_t min_nodes = 0);
void write_edge_list(std::ostream& out, const Topology& topo);

struct WakeupSchedule {
  std::vector<double> wake;  // slots (integral) for the slotted engine, time otherwise

  static WakeupSchedule simultaneous(std::size_t n);
  static WakeupSchedule uniform_slots(std::size_t n, std::uint64_t max_slot, Rng& rng);
  static WakeupSchedule uniform_times(std::size_t n, double max_time, Rng& rng);
  /// Node i wakes at i * step.
  static WakeupSchedule stagger(std::size_t n, double step);
};

/// "node wake" per line.
WakeupSchedule parse_wakeup(std::istream& in, std::size_t n);

struct DynamicEvent {
  enum class Kind { AddNode, RemoveNode, AddEdge, RemoveEdge };

  std::uint64_t at_period = 0;
  Kind kind = Kind::AddEdge;
  NodeId u = 0;
  NodeId v = 0;
  std::vector<NodeId> neighbors;  // AddNode only
};

/// "period kind args" per line:
///   <p> add_node <nbr>...   <p> remove_node <v>
///   <p> add_edge <u> <v>    <p> remove_edge <u> <v>
/// Result is sorted by period, stable within a period.
std::vector<DynamicEvent> parse_events(std::istream& in);

/// Applies one event; returns the id of an added node (or the affected node).
NodeId apply_event(Topology& topo, const DynamicEvent& ev);

}  // namespace beeps
