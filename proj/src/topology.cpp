#include "beeps/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace beeps {

Topology::Topology(std::size_t n) : adjacency_(n), active_(n, 1) {}

NodeId Topology::add_node() {
  adjacency_.emplace_back();
  active_.push_back(1);
  return static_cast<NodeId>(adjacency_.size() - 1);
}

void Topology::check_node(NodeId v) const {
  if (v >= adjacency_.size()) throw ConfigError("node " + std::to_string(v) + " does not exist");
  if (!active_[v]) throw ConfigError("node " + std::to_string(v) + " was removed");
}

void Topology::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw ConfigError("self-loop on node " + std::to_string(u));
  auto& nu = adjacency_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return;
  nu.insert(it, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

void Topology::remove_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (!has_edge(u, v)) {
    throw ConfigError("edge " + std::to_string(u) + "-" + std::to_string(v) + " does not exist");
  }
  auto& nu = adjacency_[u];
  nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
  auto& nv = adjacency_[v];
  nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
}

void Topology::remove_node(NodeId v) {
  check_node(v);
  for (NodeId u : adjacency_[v]) {
    auto& nu = adjacency_[u];
    nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
  }
  adjacency_[v].clear();
  active_[v] = 0;
}

std::size_t Topology::active_count() const noexcept {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), std::uint8_t{1}));
}

bool Topology::has_edge(NodeId u, NodeId v) const {
  const auto& nu = adjacency_.at(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::size_t Topology::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
  return best;
}

std::size_t Topology::neighborhood_max_degree(NodeId v) const {
  std::size_t best = degree(v);
  for (NodeId u : adjacency_.at(v)) best = std::max(best, degree(u));
  return best;
}

std::size_t Topology::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency_) twice += nbrs.size();
  return twice / 2;
}

std::vector<Edge> Topology::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Topology gnp(std::size_t n, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw ConfigError("gnp: p must lie in [0, 1]");
  Topology g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.open01() < p) g.add_edge(u, v);
    }
  }
  return g;
}

Topology random_regular(std::size_t n, std::size_t d, Rng& rng) {
  if (d >= n) throw ConfigError("random-regular: degree must be below n");
  if ((n * d) % 2 != 0) throw ConfigError("random-regular: n*d must be even");
  // Pairing model: draw stub pairs, reject loops and multi-edges, restart when stuck.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Topology g(n);
    std::vector<NodeId> stubs;
    stubs.reserve(n * d);
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      bool placed = false;
      for (int tries = 0; tries < 100; ++tries) {
        const auto i = rng.below(stubs.size());
        const auto j = rng.below(stubs.size());
        const NodeId u = stubs[i];
        const NodeId v = stubs[j];
        if (i == j || u == v || g.has_edge(u, v)) continue;
        g.add_edge(u, v);
        // Remove the larger index first so the smaller stays valid.
        const auto hi = std::max(i, j);
        const auto lo = std::min(i, j);
        stubs[hi] = stubs.back();
        stubs.pop_back();
        stubs[lo] = stubs.back();
        stubs.pop_back();
        placed = true;
        break;
      }
      stuck = !placed;
    }
    if (!stuck) return g;
  }
  throw ConfigError("random-regular: failed to generate a simple graph");
}

Topology star(std::size_t n) {
  Topology g(n);
  for (NodeId v = 1; v < n; ++v) g.add_edge(0, v);
  return g;
}

Topology clique(std::size_t n) {
  Topology g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

Topology cycle_of_blocks(std::size_t k) {
  if (k < 2) throw ConfigError("cycle-of-blocks needs at least two blocks");
  Topology g(4 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto a = static_cast<NodeId>(4 * i);
    const NodeId b = a + 1, c = a + 2, d = a + 3;
    g.add_edge(a, b);
    g.add_edge(b, c);
    g.add_edge(c, d);
    g.add_edge(a, c);
    g.add_edge(b, d);
    g.add_edge(d, static_cast<NodeId>(4 * ((i + 1) % k)));
  }
  return g;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::string_view what) {
  T value{};
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw ConfigError("bad number '" + std::string(tok) + "' for " + std::string(what));
  return value;
}

/// Splits a line into whitespace-separated tokens, dropping '#' comments.
std::vector<std::string> tokens(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Topology make_graph(std::string_view spec, std::uint64_t seed, std::size_t min_nodes) {
  const auto parts = split(spec, ':');
  const auto& kind = parts.front();
  Rng rng(derive_seed(seed, 0, Stream::Topology));
  auto arg = [&](std::size_t i) -> std::string_view {
    if (i >= parts.size()) throw ConfigError("graph spec '" + std::string(spec) + "' is missing arguments");
    return parts[i];
  };
  if (kind == "gnp") return gnp(parse_number<std::size_t>(arg(1), "n"), parse_number<double>(arg(2), "p"), rng);
  if (kind == "regular") {
    return random_regular(parse_number<std::size_t>(arg(1), "n"), parse_number<std::size_t>(arg(2), "d"), rng);
  }
  if (kind == "star") return star(parse_number<std::size_t>(arg(1), "n"));
  if (kind == "clique") return clique(parse_number<std::size_t>(arg(1), "n"));
  if (kind == "blocks") return cycle_of_blocks(parse_number<std::size_t>(arg(1), "k"));
  std::ifstream in{std::string(spec)};
  if (!in) throw ConfigError("cannot open graph file '" + std::string(spec) + "'");
  return parse_edge_list(in, min_nodes);
}

Topology parse_edge_list(std::istream& in, std::size_t min_nodes) {
  std::vector<Edge> edges;
  std::size_t n = min_nodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ConfigError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    const auto u = parse_number<NodeId>(tok[0], "u");
    const auto v = parse_number<NodeId>(tok[1], "v");
    if (u == v) throw ConfigError("edge list line " + std::to_string(lineno) + ": self-loop");
    edges.emplace_back(u, v);
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  Topology g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void write_edge_list(std::ostream& out, const Topology& topo) {
  for (auto [u, v] : topo.edges()) out << u << ' ' << v << '\n';
}

WakeupSchedule WakeupSchedule::simultaneous(std::size_t n) { return {std::vector<double>(n, 0.0)}; }

WakeupSchedule WakeupSchedule::uniform_slots(std::size_t n, std::uint64_t max_slot, Rng& rng) {
  WakeupSchedule w{std::vector<double>(n)};
  for (auto& x : w.wake) x = static_cast<double>(rng.below(max_slot + 1));
  return w;
}

WakeupSchedule WakeupSchedule::uniform_times(std::size_t n, double max_time, Rng& rng) {
  WakeupSchedule w{std::vector<double>(n)};
  for (auto& x : w.wake) x = rng.uniform(0.0, max_time);
  return w;
}

WakeupSchedule WakeupSchedule::stagger(std::size_t n, double step) {
  WakeupSchedule w{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) w.wake[i] = static_cast<double>(i) * step;
  return w;
}

WakeupSchedule parse_wakeup(std::istream& in, std::size_t n) {
  WakeupSchedule w = WakeupSchedule::simultaneous(n);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ConfigError("wakeup line " + std::to_string(lineno) + ": expected 'node wake'");
    const auto v = parse_number<NodeId>(tok[0], "node");
    const auto t = parse_number<double>(tok[1], "wake");
    if (v >= n) throw ConfigError("wakeup line " + std::to_string(lineno) + ": unknown node");
    if (!(t >= 0.0)) throw ConfigError("wakeup line " + std::to_string(lineno) + ": negative wake");
    w.wake[v] = t;
  }
  return w;
}

std::vector<DynamicEvent> parse_events(std::istream& in) {
  std::vector<DynamicEvent> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    const auto where = "events line " + std::to_string(lineno);
    if (tok.size() < 2) throw ConfigError(where + ": expected 'period kind args'");
    DynamicEvent ev;
    ev.at_period = parse_number<std::uint64_t>(tok[0], "period");
    const auto& kind = tok[1];
    if (kind == "add_node") {
      ev.kind = DynamicEvent::Kind::AddNode;
      for (std::size_t i = 2; i < tok.size(); ++i) ev.neighbors.push_back(parse_number<NodeId>(tok[i], "neighbor"));
    } else if (kind == "remove_node") {
      if (tok.size() != 3) throw ConfigError(where + ": remove_node takes one node");
      ev.kind = DynamicEvent::Kind::RemoveNode;
      ev.u = parse_number<NodeId>(tok[2], "node");
    } else if (kind == "add_edge" || kind == "remove_edge") {
      if (tok.size() != 4) throw ConfigError(where + ": " + kind + " takes two nodes");
      ev.kind = kind == "add_edge" ? DynamicEvent::Kind::AddEdge : DynamicEvent::Kind::RemoveEdge;
      ev.u = parse_number<NodeId>(tok[2], "u");
      ev.v = parse_number<NodeId>(tok[3], "v");
    } else {
      throw ConfigError(where + ": unknown event kind '" + kind + "'");
    }
    events.push_back(std::move(ev));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const DynamicEvent& a, const DynamicEvent& b) { return a.at_period < b.at_period; });
  return events;
}

NodeId apply_event(Topology& topo, const DynamicEvent& ev) {
  switch (ev.kind) {
    case DynamicEvent::Kind::AddNode: {
      for (NodeId u : ev.neighbors) {
        if (u >= topo.size() || !topo.active(u)) throw ConfigError("add_node: neighbor " + std::to_string(u) + " does not exist");
      }
      const NodeId v = topo.add_node();
      for (NodeId u : ev.neighbors) topo.add_edge(u, v);
      return v;
    }
    case DynamicEvent::Kind::RemoveNode:
      topo.remove_node(ev.u);
      return ev.u;
    case DynamicEvent::Kind::AddEdge:
      topo.add_edge(ev.u, ev.v);
      return ev.u;
    case DynamicEvent::Kind::RemoveEdge:
      topo.remove_edge(ev.u, ev.v);
      return ev.u;
  }
  return ev.u;
}

}  // namespace beeps
