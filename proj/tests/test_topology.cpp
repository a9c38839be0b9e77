#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "beeps/topology.hpp"

using namespace beeps;

namespace {

std::set<NodeId> closed_neighborhood(const Topology& g, NodeId v) {
  std::set<NodeId> s(g.neighbors(v).begin(), g.neighbors(v).end());
  s.insert(v);
  return s;
}

}  // namespace

TEST_CASE("edges are undirected and deduplicated") {
  Topology g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(1, 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK(g.degree(1) == 2);
  CHECK(g.max_degree() == 2);
  CHECK(g.neighborhood_max_degree(0) == 2);
  CHECK_THROWS_AS(g.add_edge(2, 2), ConfigError);
  CHECK_THROWS_AS(g.add_edge(0, 7), ConfigError);
  CHECK_THROWS_AS(g.remove_edge(0, 2), ConfigError);
  g.remove_node(1);
  CHECK_FALSE(g.active(1));
  CHECK(g.active_count() == 2);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("star, clique and random-regular shapes") {
  const auto s = star(65);
  CHECK(s.degree(0) == 64);
  CHECK(s.degree(10) == 1);
  CHECK(s.neighborhood_max_degree(10) == 64);
  const auto c = clique(16);
  CHECK(c.edge_count() == 16 * 15 / 2);
  Rng rng(3);
  const auto r = random_regular(64, 4, rng);
  for (NodeId v = 0; v < r.size(); ++v) CHECK(r.degree(v) == 4);
}

TEST_CASE("gnp is reproducible from the seed") {
  const auto a = make_graph("gnp:64:0.1", 11);
  const auto b = make_graph("gnp:64:0.1", 11);
  const auto c = make_graph("gnp:64:0.1", 12);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
  CHECK(a.size() == 64);
}

TEST_CASE("cycle of blocks: counts, degrees and twins") {
  const auto g = cycle_of_blocks(2);
  CHECK(g.size() == 8);
  CHECK(g.edge_count() == 12);
  for (std::size_t k : {2u, 5u, 16u}) {
    const auto h = cycle_of_blocks(k);
    for (NodeId v = 0; v < h.size(); ++v) CHECK(h.degree(v) == 3);
    for (std::size_t i = 0; i < k; ++i) {
      const auto base = static_cast<NodeId>(4 * i);
      const std::set<NodeId> block{base, base + 1, base + 2, base + 3};
      CHECK(closed_neighborhood(h, base + 1) == block);
      CHECK(closed_neighborhood(h, base + 2) == block);
    }
  }
  CHECK_THROWS_AS(cycle_of_blocks(1), ConfigError);
}

TEST_CASE("edge-list round trip with comments") {
  std::istringstream in("# triangle plus tail\n0 1\n1 2\n\n2 0  # closing edge\n2 3\n");
  const auto g = parse_edge_list(in);
  CHECK(g.size() == 4);
  CHECK(g.edge_count() == 4);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream back(out.str());
  CHECK(parse_edge_list(back).edges() == g.edges());

  std::istringstream padded("0 1\n");
  CHECK(parse_edge_list(padded, 5).size() == 5);

  std::istringstream bad("0 x\n");
  CHECK_THROWS_AS(parse_edge_list(bad), ConfigError);
}

TEST_CASE("generator specs") {
  CHECK(make_graph("star:9", 1).size() == 9);
  CHECK(make_graph("clique:4", 1).edge_count() == 6);
  CHECK(make_graph("blocks:3", 1).size() == 12);
  CHECK(make_graph("regular:10:3", 1).max_degree() == 3);
  CHECK_THROWS_AS(make_graph("torus:9", 1), ConfigError);
  CHECK_THROWS_AS(make_graph("gnp:9", 1), ConfigError);
}

TEST_CASE("events parse, sort by period and apply") {
  std::istringstream in(
      "# churn\n"
      "20 remove_edge 0 1\n"
      "10 add_node 0 1 2\n"
      "10 remove_node 3\n"
      "15 add_edge 2 3\n");
  const auto ev = parse_events(in);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0].at_period == 10);
  CHECK(ev[0].kind == DynamicEvent::Kind::AddNode);
  CHECK(ev[0].neighbors == std::vector<NodeId>{0, 1, 2});
  CHECK(ev[1].kind == DynamicEvent::Kind::RemoveNode);
  CHECK(ev[3].at_period == 20);

  Topology g = clique(4);
  const NodeId fresh = apply_event(g, ev[0]);
  CHECK(fresh == 4);
  CHECK(g.degree(4) == 3);
  apply_event(g, ev[1]);
  CHECK_FALSE(g.active(3));

  std::istringstream malformed("5 add_edge 1\n");
  CHECK_THROWS_AS(parse_events(malformed), ConfigError);
  std::istringstream unknown("5 teleport 1 2\n");
  CHECK_THROWS_AS(parse_events(unknown), ConfigError);

  Topology two(2);
  two.add_edge(0, 1);
  apply_event(two, DynamicEvent{0, DynamicEvent::Kind::RemoveEdge, 0, 1, {}});
  CHECK(two.degree(0) == 0);
  CHECK(two.degree(1) == 0);
  CHECK_THROWS_AS(apply_event(two, DynamicEvent{0, DynamicEvent::Kind::RemoveEdge, 0, 1, {}}), ConfigError);
  CHECK_THROWS_AS(apply_event(two, DynamicEvent{0, DynamicEvent::Kind::AddEdge, 0, 9, {}}), ConfigError);
}

TEST_CASE("wakeup schedules") {
  CHECK(WakeupSchedule::simultaneous(3).wake == std::vector<double>{0, 0, 0});
  CHECK(WakeupSchedule::stagger(3, 2.0).wake == std::vector<double>{0, 2, 4});
  Rng rng(5);
  const auto slots = WakeupSchedule::uniform_slots(50, 16, rng);
  for (double w : slots.wake) {
    CHECK(w == std::floor(w));
    CHECK(w >= 0);
    CHECK(w <= 16);
  }
  std::istringstream in("0 3\n2 1.5\n");
  const auto parsed = parse_wakeup(in, 3);
  CHECK(parsed.wake == std::vector<double>{3, 0, 1.5});
  std::istringstream bad("7 1\n");
  CHECK_THROWS_AS(parse_wakeup(bad, 3), ConfigError);
}
