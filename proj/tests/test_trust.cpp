#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"
#include "trustconnect/errors.hpp"
#include "trustconnect/experiment.hpp"
#include "trustconnect/report_io.hpp"
#include "trustconnect/trust.hpp"

using namespace trustconnect;

namespace {

TrustParams single_pass(double k, double alpha, double c0 = 1.0) {
  TrustParams p;
  p.k = k;
  p.alpha = alpha;
  p.c0 = c0;
  return p;
}

}  // namespace

TEST_CASE("edge_weight") {
  CHECK(edge_weight(0.0, 3.7) == 1.0);
  CHECK(edge_weight(5.2, 0.0) == 1.0);
  // exp(-1) to 40 digits: 0.3678794411714423215955...
  CHECK(edge_weight(2.0, 0.5) == doctest::Approx(0.36787944117144233).epsilon(1e-16));
  CHECK_THROWS_AS(edge_weight(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(edge_weight(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("edge_weight properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d_dist(0.0, 20.0), k_dist(0.0, 5.0);
  for (int t = 0; t < 5000; ++t) {
    const double d = d_dist(rng), k1 = k_dist(rng), k2 = k_dist(rng);
    const double w = edge_weight(d, k1);
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
    CHECK(std::abs(edge_weight(d, k1) - edge_weight(d, k2)) <= d * std::abs(k1 - k2));
    if (k1 > 0.0) CHECK(edge_weight(d + 0.5, k1) < w);
    if (d > 0.0 && k1 < k2) CHECK(edge_weight(d, k2) <= edge_weight(d, k1));
  }
}

TEST_CASE("trust_scores: hand-evaluated single pass") {
  SUBCASE("isolated node") {
    DependencyGraph g({{0, "E0", 0.4}}, {});
    CHECK(trust_scores(g, clean_snapshot(g), single_pass(1.0, 0.1)).values == std::vector<double>{0.0});
  }
  SUBCASE("edge 1 -> 0: neighbor already scored") {
    DependencyGraph g({{0, "E0", 0.8}, {1, "E1", 0.3}}, {{1, 0}});
    const auto t = trust_scores(g, clean_snapshot(g), single_pass(1.0, 0.1));
    CHECK(t.values[0] == 0.0);
    CHECK(t.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("edge 0 -> 1: neighbor falls back to c0") {
    DependencyGraph g({{0, "E0", 0.3}, {1, "E1", 0.8}}, {{0, 1}});
    const auto t = trust_scores(g, clean_snapshot(g), single_pass(1.0, 0.1));
    CHECK(t.values[0] == doctest::Approx(1.08).epsilon(1e-12));
    CHECK(t.values[1] == 0.0);
  }
}

TEST_CASE("trust_scores equals the brute-force transcription") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> k_dist(0.0, 3.0), a_dist(0.0, 1.0), c_dist(0.0, 2.0);
  for (int t = 0; t < 300; ++t) {
    const auto g = tc_test::random_graph(rng, 6, 0.45);
    const auto snap = tc_test::random_snapshot(rng, g);
    const double k = k_dist(rng), alpha = a_dist(rng), c0 = c_dist(rng);
    const auto got = trust_scores(g, snap, single_pass(k, alpha, c0));
    const auto want = tc_test::oracle_single_pass(g, snap, k, alpha, c0);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      CHECK(got.values[i] == doctest::Approx(want.at(g.nodes()[i].id)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fixed-point mode") {
  SUBCASE("two-cycle converges to the closed form") {
    // T = 0.5 * 0.2 * T + 1  =>  T = 1 / 0.9
    DependencyGraph g({{0, "E0", 0.5}, {1, "E1", 0.5}}, {{0, 1}, {1, 0}});
    TrustParams p = single_pass(1.0, 0.2);
    p.mode = TrustMode::fixed_point;
    p.tolerance = 1e-13;
    const auto t = trust_scores(g, clean_snapshot(g), p);
    CHECK(t.converged);
    CHECK(t.iterations > 1);
    CHECK(t.values[0] == doctest::Approx(1.0 / 0.9).epsilon(1e-12));
    CHECK(t.values[1] == doctest::Approx(1.0 / 0.9).epsilon(1e-12));
  }
  SUBCASE("matches the naive iteration on random graphs") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
      const auto g = tc_test::random_graph(rng, 6, 0.4);
      const auto snap = tc_test::random_snapshot(rng, g);
      TrustParams p = single_pass(0.7, 0.05);
      p.mode = TrustMode::fixed_point;
      p.max_iterations = 7;
      p.tolerance = 1e-300;
      const auto got = trust_scores(g, snap, p);
      const auto want = tc_test::oracle_fixed_point(g, snap, 0.7, 0.05, 1.0, got.iterations);
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK(got.values[i] == doctest::Approx(want.at(g.nodes()[i].id)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("divergence is reported with the last iterate") {
    DependencyGraph g({{0, "E0", 1.0}, {1, "E1", 1.0}}, {{0, 1}, {1, 0}});
    TrustParams p = single_pass(1.0, 3.0);
    p.mode = TrustMode::fixed_point;
    p.max_iterations = 40;
    const auto t = trust_scores(g, clean_snapshot(g), p);
    CHECK_FALSE(t.converged);
    CHECK(t.iterations == 40);
    const auto want = tc_test::oracle_fixed_point(g, clean_snapshot(g), 1.0, 3.0, 1.0, 40);
    CHECK(t.values[0] == doctest::Approx(want.at(0)).epsilon(1e-12));
  }
  SUBCASE("overflow stops early without claiming convergence") {
    DependencyGraph g({{0, "E0", 1.0}, {1, "E1", 1.0}}, {{0, 1}, {1, 0}});
    TrustParams p = single_pass(1.0, 1e200);
    p.mode = TrustMode::fixed_point;
    const auto t = trust_scores(g, clean_snapshot(g), p);
    CHECK_FALSE(t.converged);
    CHECK(t.iterations < p.max_iterations);
  }
}

TEST_CASE("TrustParams validation") {
  TrustParams p;
  CHECK_NOTHROW(p.validate());
  p.k = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.tolerance = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.max_iterations = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK(parse_trust_mode("fixed-point") == TrustMode::fixed_point);
  CHECK_THROWS_AS(parse_trust_mode("recursive"), std::invalid_argument);
}

TEST_CASE("baseline_trust") {
  SUBCASE("isolated node") {
    DependencyGraph g({{0, "E0", 0.4}}, {});
    CHECK(baseline_trust(g, single_pass(1.0, 0.1)).values == std::vector<double>{0.0});
  }
  SUBCASE("alpha = 0 leaves the out-degree") {
    DependencyGraph g({{0, "E0", 0.1}, {1, "E1", 0.9}, {2, "E2", 0.3}, {3, "E3", 0.7}}, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(baseline_trust(g, single_pass(1.0, 0.0)).values[0] == 3.0);
  }
  SUBCASE("equals trust on the synthesized clean snapshot, bitwise") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 40; ++t) {
      const auto g = tc_test::random_graph(rng, 12, 0.3);
      ScenarioSpec scenario;
      for (const auto& n : g.nodes()) scenario.ground_truth[n.id] = std::uniform_real_distribution<double>(-50, 50)(rng);
      for (auto mode : {TrustMode::single_pass, TrustMode::fixed_point}) {
        TrustParams p = single_pass(1.3, 0.07);
        p.mode = mode;
        CHECK(baseline_trust(g, p).values == trust_scores(g, synthesize_snapshot(g, scenario), p).values);
      }
    }
  }
}

TEST_CASE("single-pass monotonicity") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    const auto g = tc_test::random_graph(rng, 8, 0.4);
    if (g.edge_count() == 0) continue;
    auto snap = tc_test::random_snapshot(rng, g);
    const auto p = single_pass(0.8, 0.15);
    const auto before = trust_scores(g, snap, p).values;

    {
      // raising one deviation never raises any score
      auto bumped = snap;
      const auto& e = g.edges()[static_cast<std::size_t>(rng() % g.edge_count())];
      const double obs = bumped.observed.at(e.from);
      const double inf = bumped.inferred.at(e);
      bumped.inferred[e] = inf >= obs ? inf + 1.0 : inf - 1.0;
      const auto after = trust_scores(g, bumped, p).values;
      for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] <= before[i]);
    }
    {
      // raising alpha never lowers any score
      auto higher = p;
      higher.alpha = 0.3;
      const auto after = trust_scores(g, snap, higher).values;
      for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] >= before[i]);
    }
  }
}

TEST_CASE("adjusted_trust") {
  CHECK(adjusted_trust(2.0, 1.5, 0.5) == 1.75);
  CHECK(adjusted_trust(7.25, 3.1, 1.0) == 7.25);
  CHECK(adjusted_trust(7.25, 3.1, 0.0) == 3.1);
  CHECK_THROWS_AS(adjusted_trust(1.0, 1.0, 1.01), std::invalid_argument);
  CHECK_THROWS_AS(adjusted_trust(1.0, 1.0, -0.01), std::invalid_argument);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v(0.0, 20.0), e(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const double b = v(rng), tr = v(rng), eps = e(rng);
    const double got = adjusted_trust(b, tr, eps);
    CHECK(std::abs(got - (b - (b - tr) * (1.0 - eps))) <= 1e-12);
    CHECK(got >= std::min(b, tr));
    CHECK(got <= std::max(b, tr));
  }
}

TEST_CASE("full_report") {
  SUBCASE("clean snapshot: T == BTV and network trust 1") {
    const auto fx = paper_fixture();
    const auto r = full_report(fx.graph, clean_snapshot(fx.graph), single_pass(0.5, 0.1));
    CHECK(r.network_trust == 1.0);
    for (const auto& row : r.rows) {
      CHECK(row.trust == row.btv);
      CHECK(row.eatv == row.btv);
    }
  }
  SUBCASE("isolated nodes") {
    DependencyGraph g({{0, "E0", 0.2}, {1, "E1", 0.9}}, {});
    const auto r = full_report(g, clean_snapshot(g), single_pass(1.0, 0.1));
    for (const auto& row : r.rows) {
      CHECK(row.btv == 0.0);
      CHECK(row.trust == 0.0);
      CHECK(row.eatv == 0.0);
    }
    CHECK(r.network_trust == 1.0);
  }
  SUBCASE("one compromised high-exposure ECU lowers network trust") {
    const auto fx = paper_fixture();
    ScenarioSpec s;
    s.attack = AttackSpec{{2}, AttackMode::self_injection, 1.0};
    const auto r = full_report(fx.graph, synthesize_snapshot(fx.graph, s), single_pass(0.5, 0.1));
    CHECK(r.network_trust < 1.0);
    CHECK(r.network_trust >= 0.0);
  }
  SUBCASE("EATV lies between BTV and T on attacked snapshots") {
    const auto fx = paper_fixture();
    const auto r = full_report(fx.graph, synthesize_snapshot(fx.graph, fx.scenario), single_pass(1.0, 0.2), 9);
    CHECK(r.rows.size() == 20);
    CHECK(r.provenance.seed == 9);
    CHECK(r.provenance.graph_hash == graph_hash(fx.graph));
    for (const auto& row : r.rows) {
      CHECK(row.eatv >= std::min(row.btv, row.trust));
      CHECK(row.eatv <= std::max(row.btv, row.trust));
    }
  }
  SUBCASE("serializations are deterministic and the CSV reloads exactly") {
    const auto fx = paper_fixture();
    const auto snap = synthesize_snapshot(fx.graph, fx.scenario);
    const auto a = full_report(fx.graph, snap, single_pass(1.0, 0.2));
    const auto b = full_report(fx.graph, snap, single_pass(1.0, 0.2));
    CHECK(report_to_text(a) == report_to_text(b));
    CHECK(report_to_json(a) == report_to_json(b));
    CHECK(parse_report_csv(report_to_csv(a)) == a.rows);
    CHECK(report_to_csv(a).rfind("id,label,epsilon,btv,trust,eatv\n", 0) == 0);
  }
  SUBCASE("invalid graphs and incomplete snapshots are rejected") {
    DependencyGraph bad({{0, "E0", 2.0}}, {});
    CHECK_THROWS_AS(full_report(bad, Snapshot{{{0, 0.0}}, {}}, TrustParams{}), ValidationError);
    DependencyGraph g({{0, "E0", 0.2}, {1, "E1", 0.9}}, {{0, 1}});
    CHECK_THROWS_AS(full_report(g, Snapshot{{{0, 0.0}, {1, 0.0}}, {}}, TrustParams{}), ValidationError);
  }
}

TEST_CASE("network_trust aggregate") {
  std::vector<TrustRow> rows{{0, "E0", 0.5, 4.0, 2.0, 0.0}, {1, "E1", 1.0, 2.0, 3.0, 0.0}, {2, "E2", 0.0, 0.0, 0.0, 0.0}};
  // (0.5 * 0.5 + 1.0 * 1.0 + 0 * 1) / 1.5
  CHECK(network_trust(rows) == doctest::Approx(1.25 / 1.5).epsilon(1e-15));
  rows[0].epsilon = rows[1].epsilon = 0.0;
  CHECK(network_trust(rows) == doctest::Approx(2.5 / 3.0).epsilon(1e-15));
  CHECK(network_trust(std::vector<TrustRow>{}) == 1.0);
}
