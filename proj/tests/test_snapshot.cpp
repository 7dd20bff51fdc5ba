#include <doctest.h>

#include <random>

#include "support.hpp"
#include "trustconnect/errors.hpp"
#include "trustconnect/snapshot.hpp"

using namespace trustconnect;

namespace {

// 0 -> 4, 4 -> 0, 4 -> 2, 2 -> 7, 5 -> 7, 7 -> 0
DependencyGraph small_graph() {
  std::vector<EcuNode> nodes;
  for (NodeId id : {0u, 2u, 4u, 5u, 7u}) nodes.push_back({id, "E" + std::to_string(id), 0.5});
  return {nodes, {{0, 4}, {4, 0}, {4, 2}, {2, 7}, {5, 7}, {7, 0}}};
}

ScenarioSpec dyadic_truth(const DependencyGraph& g) {
  ScenarioSpec s;
  for (const auto& n : g.nodes()) s.ground_truth[n.id] = 1.25 * n.id + 3.5;
  return s;
}

}  // namespace

TEST_CASE("synthesize_snapshot: baseline has zero deviation") {
  const auto g = small_graph();
  const auto snap = synthesize_snapshot(g, dyadic_truth(g));
  for (const auto& e : g.edges()) CHECK(snap.inferred.at(e) == snap.observed.at(e.from));
  for (const auto& [e, d] : deviations(g, snap)) CHECK(d == 0.0);
}

TEST_CASE("synthesize_snapshot: self-injection touches only out-edges of the attacker") {
  const auto g = small_graph();
  auto scenario = dyadic_truth(g);
  scenario.attack = AttackSpec{{4}, AttackMode::self_injection, 2.0};
  const auto snap = synthesize_snapshot(g, scenario);
  CHECK(snap.observed.at(4) == scenario.ground_truth.at(4) + 2.0);
  for (const auto& [e, d] : deviations(g, snap)) {
    CHECK(d == (e.from == 4 ? 2.0 : 0.0));
  }
}

TEST_CASE("synthesize_snapshot: inference corruption touches only in-edges of the attacker") {
  const auto g = small_graph();
  auto scenario = dyadic_truth(g);
  scenario.attack = AttackSpec{{7}, AttackMode::inference_corruption, 1.0};
  const auto snap = synthesize_snapshot(g, scenario);
  CHECK(snap.observed == synthesize_snapshot(g, dyadic_truth(g)).observed);
  for (const auto& [e, d] : deviations(g, snap)) {
    CHECK(d == (e.to == 7 ? 1.0 : 0.0));
  }
}

TEST_CASE("synthesize_snapshot: both modes and noise") {
  const auto g = small_graph();
  auto scenario = dyadic_truth(g);
  scenario.attack = AttackSpec{{4}, AttackMode::both, 0.5};
  const auto snap = synthesize_snapshot(g, scenario);
  const auto devs = deviations(g, snap);
  CHECK(devs.at({4, 0}) == 0.5);
  CHECK(devs.at({0, 4}) == 0.5);
  CHECK(devs.at({2, 7}) == 0.0);

  scenario.attack.reset();
  scenario.noise_sigma = 0.1;
  scenario.seed = 11;
  const auto noisy = synthesize_snapshot(g, scenario);
  CHECK(serialize_snapshot(noisy) == serialize_snapshot(synthesize_snapshot(g, scenario)));
  bool any_nonzero = false;
  for (const auto& [e, d] : deviations(g, noisy)) {
    CHECK(d >= 0.0);
    any_nonzero |= d > 0.0;
  }
  CHECK(any_nonzero);
  scenario.seed = 12;
  CHECK(serialize_snapshot(noisy) != serialize_snapshot(synthesize_snapshot(g, scenario)));
}

TEST_CASE("synthesize_snapshot: rejects inconsistent scenarios") {
  const auto g = small_graph();
  ScenarioSpec s;
  s.ground_truth[3] = 1.0;
  CHECK_THROWS_AS(synthesize_snapshot(g, s), std::invalid_argument);
  s = {};
  s.attack = AttackSpec{{42}, AttackMode::both, 1.0};
  CHECK_THROWS_AS(synthesize_snapshot(g, s), std::invalid_argument);
  s.attack = AttackSpec{{0}, AttackMode::both, -1.0};
  CHECK_THROWS_AS(synthesize_snapshot(g, s), std::invalid_argument);
  s = {};
  s.noise_sigma = -0.5;
  CHECK_THROWS_AS(synthesize_snapshot(g, s), std::invalid_argument);
}

TEST_CASE("deviations: Eq. 1 arithmetic") {
  DependencyGraph g({{0, "E0", 0.5}, {1, "E1", 0.5}}, {{0, 1}});
  Snapshot s;
  s.observed = {{0, 5.0}, {1, 0.0}};
  s.inferred = {{{0, 1}, 5.0}};
  CHECK(deviations(g, s).at({0, 1}) == 0.0);
  s.inferred[{0, 1}] = 3.5;
  CHECK(deviations(g, s).at({0, 1}) == 1.5);
  s.observed[0] = 3.5;
  s.inferred[{0, 1}] = 5.0;
  CHECK(deviations(g, s).at({0, 1}) == 1.5);
}

TEST_CASE("deviations are non-negative on arbitrary snapshots") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const auto g = tc_test::random_graph(rng, 7, 0.5);
    for (const auto& [e, d] : deviations(g, tc_test::random_snapshot(rng, g))) CHECK(d >= 0.0);
  }
}

TEST_CASE("completeness") {
  const auto g = small_graph();
  auto snap = clean_snapshot(g);
  CHECK(check_completeness(g, snap).empty());
  snap.inferred.erase({4, 2});
  const auto problems = check_completeness(g, snap);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0] == "missing inferred value for edge (4,2)");
  CHECK_THROWS_AS(deviations(g, snap), ValidationError);
  snap = clean_snapshot(g);
  snap.inferred[{0, 2}] = 1.0;
  snap.observed.erase(5);
  CHECK(check_completeness(g, snap).size() == 2);
}

TEST_CASE("snapshot files") {
  tc_test::ScratchDir dir("snapshot");
  const auto g = small_graph();
  auto scenario = dyadic_truth(g);
  scenario.noise_sigma = 0.3;
  scenario.seed = 5;
  scenario.attack = AttackSpec{{2, 5}, AttackMode::both, 0.75};
  const auto snap = synthesize_snapshot(g, scenario);

  SUBCASE("round trip at full precision") {
    save_snapshot(snap, dir / "s.tcs");
    CHECK(load_snapshot(dir / "s.tcs") == snap);
  }
  SUBCASE("hand-written file in canonical order equals in-memory construction") {
    const std::string text =
        "trustconnect-snapshot v1\n# produced elsewhere\nobs 0 1\nobs 1 2.5\ninf 0 1 0.75\ninf 1 0 2.5\n";
    Snapshot expected;
    expected.observed = {{0, 1.0}, {1, 2.5}};
    expected.inferred = {{{0, 1}, 0.75}, {{1, 0}, 2.5}};
    CHECK(parse_snapshot(text) == expected);
    CHECK(serialize_snapshot(expected) == "trustconnect-snapshot v1\nobs 0 1\nobs 1 2.5\ninf 0 1 0.75\ninf 1 0 2.5\n");
  }
  SUBCASE("parse failures report location") {
    try {
      parse_snapshot("trustconnect-snapshot v1\nobs 0 1\ninf 0 x 2\n", "s.tcs");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_snapshot("trustconnect-snapshot v1\nobs 0 1\nobs 0 2\n"), ParseError);
  }
  SUBCASE("scenario round trip") {
    save_scenario(scenario, dir / "s.scenario");
    CHECK(load_scenario(dir / "s.scenario") == scenario);
    CHECK_THROWS_AS(parse_scenario("trustconnect-scenario v1\ncompromised 1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("trustconnect-scenario v1\nattack sideways 1\n"), ParseError);
  }
}
