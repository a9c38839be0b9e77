#include <doctest.h>

#include <cmath>

#include "beeps/beepfirst.hpp"
#include "beeps/experiment.hpp"
#include "scripted.hpp"

using namespace beeps;
using beeps::testing::ScriptedTimeNode;

namespace {

std::unique_ptr<BeepFirstNode> make_node(std::uint32_t d, std::uint32_t dmax, std::uint64_t seed, double eps = 0.1) {
  return std::make_unique<BeepFirstNode>(BeepFirstParams{1.0, eps, d, dmax, false}, Rng(seed));
}

std::vector<TimeOp> periodic_beeper(double first, int beeps) {
  std::vector<TimeOp> ops{TimeOp::listen(first)};
  for (int i = 0; i < beeps; ++i) {
    ops.push_back(TimeOp::beep());
    ops.push_back(TimeOp::listen(1.0));
  }
  return ops;
}

}  // namespace

TEST_CASE("initial interval and buffer") {
  auto node = make_node(0, 0, 5);
  node->start();
  const auto& st = node->state();
  CHECK(st.interval == doctest::Approx(0.45));
  CHECK(st.buffer >= 0.45);
  CHECK(st.buffer <= 0.5);
  CHECK(st.eps_v >= 0.0);
  CHECK(st.eps_v < 0.1);
  CHECK(beepfirst_interval(1.0, 0.2, 3) == doctest::Approx(0.1));
  CHECK(beepfirst_buffer(2.0, 0.0, 1) == doctest::Approx(0.5));
}

TEST_CASE("the start delay is reproducible from the seed") {
  auto a = make_node(2, 3, 77);
  auto b = make_node(2, 3, 77);
  a->start();
  b->start();
  CHECK(a->state().eps_v == b->state().eps_v);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_node(0, 0, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_node(0, 0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_node(3, 2, 1), std::invalid_argument);
}

TEST_CASE("an isolated node settles at phase zero and keeps beeping there") {
  // Node 1 is a pure listener, so node 0 hears nothing during its scan.
  Topology g(2);
  g.add_edge(0, 1);
  auto factory = [](NodeId v) -> std::unique_ptr<TimeProtocol> {
    if (v == 0) return make_node(1, 1, 9);
    return std::make_unique<ScriptedTimeNode>(std::vector<TimeOp>{TimeOp::listen(50.0)});
  };
  ContinuousEngine e(g, 1.0, WakeupSchedule::simultaneous(2), factory);
  e.run_until(2.0 + 5.0);
  const auto& node = e.protocol_as<BeepFirstNode>(0);
  CHECK(node.state().stage == BeepFirstStage::Stable);
  CHECK(node.state().phase == 0.0);
  CHECK(*node.state().stable_at == doctest::Approx(node.origin() + 1.0));

  e.run_until(60.0);
  const auto& heard = e.protocol_as<ScriptedTimeNode>(1).heard_at;
  REQUIRE(heard.size() >= 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(wrap(heard[i], 1.0) == doctest::Approx(wrap(node.origin(), 1.0)).epsilon(1e-9));
  }
  for (std::size_t i = 1; i < heard.size(); ++i) CHECK(heard[i] - heard[i - 1] == doctest::Approx(1.0));
}

TEST_CASE("a late node next to a stable one picks 0 or the stable phase plus its buffer") {
  int jumped = 0, kept_zero = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Topology g(2);
    g.add_edge(0, 1);
    // Node 0 beeps at global phase u each period; node 1 wakes at 3 + w.
    Rng pick(seed);
    const double u = pick.uniform(0.0, 1.0);
    const double w = pick.uniform(0.0, 1.0);
    auto factory = [&](NodeId v) -> std::unique_ptr<TimeProtocol> {
      if (v == 0) return std::make_unique<ScriptedTimeNode>(periodic_beeper(u, 20));
      return make_node(1, 1, seed + 1000);
    };
    WakeupSchedule wake{{0.0, 3.0 + w}};
    ContinuousEngine e(g, 1.0, wake, factory);
    e.run_until(10.0);
    const auto& node = e.protocol_as<BeepFirstNode>(1);
    REQUIRE(node.state().stage == BeepFirstStage::Stable);
    const double b = node.state().buffer;
    // Neighbour's beep in node 1's phase frame, taken into (-b, 1 - b].
    double x = wrap(u - (3.0 + w + node.origin()), 1.0);
    if (x > 1.0 - b) x -= 1.0;
    if (std::abs(x) <= b) {
      ++jumped;
      CHECK(node.state().phase == doctest::Approx(x + b));
    } else {
      ++kept_zero;
      CHECK(node.state().phase == 0.0);
    }
  }
  CHECK(jumped > 0);
  CHECK(kept_zero > 0);
}

TEST_CASE("stable neighbours on random graphs have disjoint intervals and short scans") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    BeepFirstRun run{make_graph("gnp:48:0.15", seed), {}, {}, false};
    run.config.master_seed = seed;
    run.config = resolve_beepfirst(run.config);
    run.wake = WakeupSchedule::uniform_times(48, 2.0, rng);
    const auto out = run_beepfirst(run);
    CHECK(out.clean());
    CHECK(out.max_search_periods < 1.0);
    CHECK(out.max_stabilization_periods <= 3.0);
    for (NodeId u = 0; u < run.topology.size(); ++u) {
      for (NodeId v : run.topology.neighbors(u)) {
        const auto& a = out.final_snapshot.nodes[u];
        const auto& b = out.final_snapshot.nodes[v];
        CHECK(circular_distance(a.phase, b.phase, 1.0) > b.interval);
      }
    }
  }
}

TEST_CASE("a degree lie large enough to overrun the scan is reported") {
  // Node 0 claims d = 0 (buffer near T/2) but has three beeping neighbours.
  Topology g = star(4);
  auto factory = [](NodeId v) -> std::unique_ptr<TimeProtocol> {
    if (v == 0) return make_node(0, 0, 3);
    return std::make_unique<ScriptedTimeNode>(periodic_beeper(0.05 + 0.4 * (v - 1), 20));
  };
  ContinuousEngine e(g, 1.0, WakeupSchedule::simultaneous(4), factory);
  CHECK_THROWS_AS(e.run_until(10.0), SearchOverrun);
}

TEST_CASE("delayed interval takes the largest clear radius") {
  Topology g(2);
  g.add_edge(0, 1);
  auto factory = [](NodeId v) -> std::unique_ptr<TimeProtocol> {
    if (v == 0) return std::make_unique<ScriptedTimeNode>(periodic_beeper(0.7, 20));
    return std::make_unique<BeepFirstNode>(BeepFirstParams{1.0, 0.1, 1, 1, true}, Rng(4));
  };
  ContinuousEngine e(g, 1.0, WakeupSchedule::simultaneous(2), factory);
  e.run_until(5.0);
  const auto& st = e.protocol_as<BeepFirstNode>(1).state();
  REQUIRE(st.stage == BeepFirstStage::Stable);
  REQUIRE(st.heard.size() == 1);
  const double gap = circular_distance(st.heard.values()[0], st.phase, 1.0);
  CHECK(st.interval < gap);
  CHECK(st.interval == doctest::Approx(gap));
}
