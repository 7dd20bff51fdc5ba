// Serial reference kernels against their OpenMP counterparts, plus the sweep.
//
//   ./build/bench/trustconnect_bench --benchmark_filter=FixedPoint

#include <benchmark/benchmark.h>

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "trustconnect/experiment.hpp"
#include "trustconnect/kernels.hpp"
#include "trustconnect/snapshot.hpp"

using namespace trustconnect;

namespace {

struct Workload {
  DependencyGraph graph;
  AlignedSnapshot snap;
  std::vector<double> devs;
  std::vector<double> weights;

  explicit Workload(std::size_t n) {
    // generate_random is quadratic in n; draw ~8 out-edges per node directly.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    std::vector<EcuNode> nodes;
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
      nodes.push_back({i, "E" + std::to_string(i), unit(rng)});
      for (int d = 0; d < 8; ++d) {
        const NodeId j = pick(rng);
        if (j != i) edges.push_back({i, j});
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    graph = DependencyGraph(std::move(nodes), std::move(edges));
    ScenarioSpec scenario;
    scenario.noise_sigma = 0.5;
    scenario.seed = 6;
    snap = align(graph, synthesize_snapshot(graph, scenario));
    devs.resize(graph.edge_count());
    weights.resize(graph.edge_count());
    kernels::deviations(Execution::serial, kernels::adjacency(graph), snap.observed, snap.inferred, devs);
    kernels::edge_weights(Execution::serial, devs, 1.0, weights);
  }
};

const Workload& workload(std::size_t n) {
  static std::vector<std::unique_ptr<Workload>> cache;
  for (const auto& w : cache) {
    if (w->graph.node_count() == n) return *w;
  }
  cache.push_back(std::make_unique<Workload>(n));
  return *cache.back();
}

template <Execution E>
void BM_Deviations(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(w.graph.edge_count());
  for (auto _ : state) {
    kernels::deviations(E, kernels::adjacency(w.graph), w.snap.observed, w.snap.inferred, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <Execution E>
void BM_EdgeWeights(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(w.devs.size());
  for (auto _ : state) {
    kernels::edge_weights(E, w.devs, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <Execution E>
void BM_FixedPointStep(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  std::vector<double> prev(w.graph.node_count(), 1.0), next(w.graph.node_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kernels::fixed_point_step(E, kernels::adjacency(w.graph), w.graph.epsilons(), w.weights, 0.1, prev, next));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.graph.edge_count()));
}

template <Execution E>
void BM_Evidence(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(w.graph.node_count());
  for (auto _ : state) {
    kernels::contradiction_evidence(E, kernels::adjacency(w.graph), w.graph.epsilons(), w.weights, 0.5, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.graph.edge_count()));
}

void BM_SingleSerialPass(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(w.graph.node_count());
  for (auto _ : state) {
    kernels::serial::single_pass_trust(kernels::adjacency(w.graph), w.graph.epsilons(), w.weights, 0.1, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <Execution E>
void BM_FixtureSweep(benchmark::State& state) {
  const auto spec = default_fixture_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, E).cells.size());
}

}  // namespace

#define TC_SIZES ->Arg(1000)->Arg(100000)

BENCHMARK(BM_Deviations<Execution::serial>) TC_SIZES;
BENCHMARK(BM_Deviations<Execution::parallel>) TC_SIZES;
BENCHMARK(BM_EdgeWeights<Execution::serial>) TC_SIZES;
BENCHMARK(BM_EdgeWeights<Execution::parallel>) TC_SIZES;
BENCHMARK(BM_FixedPointStep<Execution::serial>) TC_SIZES;
BENCHMARK(BM_FixedPointStep<Execution::parallel>) TC_SIZES;
BENCHMARK(BM_Evidence<Execution::serial>) TC_SIZES;
BENCHMARK(BM_Evidence<Execution::parallel>) TC_SIZES;
BENCHMARK(BM_SingleSerialPass) TC_SIZES;
BENCHMARK(BM_FixtureSweep<Execution::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FixtureSweep<Execution::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
