#include <doctest.h>

#include <random>
#include <vector>

#include "support.hpp"
#include "trustconnect/detector.hpp"
#include "trustconnect/experiment.hpp"
#include "trustconnect/kernels.hpp"
#include "trustconnect/trust.hpp"

using namespace trustconnect;

// The parallel kernels must reproduce the serial reference bit for bit.

TEST_CASE("parallel kernels match the serial reference bitwise") {
  std::mt19937_64 rng(4242);
  for (std::size_t n : {1u, 7u, 64u, 500u}) {
    const auto g = generate_random(n, n > 100 ? 0.02 : 0.3, EpsilonDistribution::uniform(), n);
    const auto snap = tc_test::random_snapshot(rng, g);
    const auto aligned = align(g, snap);
    const auto adj = kernels::adjacency(g);

    std::vector<double> dev_s(g.edge_count()), dev_p(g.edge_count());
    kernels::serial::deviations(adj, aligned.observed, aligned.inferred, dev_s);
    kernels::parallel::deviations(adj, aligned.observed, aligned.inferred, dev_p);
    CHECK(dev_s == dev_p);

    std::vector<double> w_s(g.edge_count()), w_p(g.edge_count());
    kernels::serial::edge_weights(dev_s, 0.35, w_s);
    kernels::parallel::edge_weights(dev_s, 0.35, w_p);
    CHECK(w_s == w_p);

    std::vector<double> prev(g.node_count(), 1.0), next_s(g.node_count()), next_p(g.node_count());
    const double ch_s = kernels::serial::fixed_point_step(adj, g.epsilons(), w_s, 0.1, prev, next_s);
    const double ch_p = kernels::parallel::fixed_point_step(adj, g.epsilons(), w_s, 0.1, prev, next_p);
    CHECK(next_s == next_p);
    CHECK(ch_s == ch_p);

    std::vector<double> ev_s(g.node_count()), ev_p(g.node_count());
    kernels::serial::contradiction_evidence(adj, g.epsilons(), w_s, 0.5, ev_s);
    kernels::parallel::contradiction_evidence(adj, g.epsilons(), w_s, 0.5, ev_p);
    CHECK(ev_s == ev_p);
  }
}

TEST_CASE("deviation kernel agrees with the map-based definition") {
  std::mt19937_64 rng(5);
  const auto g = tc_test::random_graph(rng, 10, 0.4);
  const auto snap = tc_test::random_snapshot(rng, g);
  const auto by_edge = deviations(g, snap);
  const auto by_slot = slot_deviations(g, snap);
  REQUIRE(by_slot.size() == g.edge_count());
  for (std::size_t s = 0; s < g.edge_count(); ++s) CHECK(by_slot[s] == by_edge.at(g.edges()[s]));
}

TEST_CASE("execution policy does not change any result") {
  const auto fx = paper_fixture();
  const auto snap = synthesize_snapshot(fx.graph, fx.scenario);
  for (auto mode : {TrustMode::single_pass, TrustMode::fixed_point}) {
    TrustParams p;
    p.mode = mode;
    p.alpha = 0.2;
    CHECK(full_report(fx.graph, snap, p, 0, Execution::serial) == full_report(fx.graph, snap, p, 0, Execution::parallel));
  }
  const auto det_s = detect(fx.graph, snap, TrustParams{}, DetectorParams{}, Execution::serial);
  const auto det_p = detect(fx.graph, snap, TrustParams{}, DetectorParams{}, Execution::parallel);
  CHECK(det_s.nodes == det_p.nodes);
  CHECK(det_s.ranking == det_p.ranking);

  const auto spec = default_fixture_sweep();
  const auto sw_s = run_sweep(spec, Execution::serial);
  const auto sw_p = run_sweep(spec, Execution::parallel);
  REQUIRE(sw_s.cells.size() == sw_p.cells.size());
  for (std::size_t c = 0; c < sw_s.cells.size(); ++c) CHECK(sw_s.cells[c].report == sw_p.cells[c].report);
}
