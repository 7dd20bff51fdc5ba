#include "trustconnect/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace trustconnect::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double node_sum(AdjacencyView adj, std::size_t i, std::span<const double> eps,
                       std::span<const double> weights, double alpha, std::span<const double> prev) {
  double sum = 0.0;
  for (std::size_t s = adj.offsets[i]; s < adj.offsets[i + 1]; ++s) {
    const std::size_t j = adj.targets[s];
    sum += eps[j] * alpha * prev[j] + weights[s];
  }
  return sum;
}

inline double change_of(double next, double prev) {
  return std::isfinite(next) ? std::abs(next - prev) : kInf;
}

inline double evidence_of(AdjacencyView adj, std::size_t i, std::span<const double> eps,
                          std::span<const double> weights, double weight_threshold) {
  double evidence = 0.0;
  for (std::size_t s = adj.offsets[i]; s < adj.offsets[i + 1]; ++s) {
    if (weights[s] < weight_threshold) evidence += eps[adj.targets[s]];
  }
  return evidence;
}

}  // namespace

AdjacencyView adjacency(const DependencyGraph& graph) noexcept {
  return {graph.adjacency_offsets(), graph.adjacency_targets(), graph.adjacency_sources()};
}

bool openmp_enabled() noexcept {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void deviations(AdjacencyView adj, std::span<const double> observed, std::span<const double> inferred,
                std::span<double> out) {
  for (std::size_t s = 0; s < adj.edge_count(); ++s) {
    out[s] = std::abs(observed[adj.sources[s]] - inferred[s]);
  }
}

void edge_weights(std::span<const double> deviations, double k, std::span<double> out) {
  for (std::size_t s = 0; s < deviations.size(); ++s) out[s] = weight_of(deviations[s], k);
}

void single_pass_trust(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                       double alpha, double prior, std::span<double> out) {
  for (std::size_t i = 0; i < adj.node_count(); ++i) {
    double sum = 0.0;
    for (std::size_t s = adj.offsets[i]; s < adj.offsets[i + 1]; ++s) {
      const std::size_t j = adj.targets[s];
      const double c = j < i ? out[j] : prior;
      sum += eps[j] * alpha * c + weights[s];
    }
    out[i] = sum;
  }
}

double fixed_point_step(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                        double alpha, std::span<const double> prev, std::span<double> next) {
  double max_change = 0.0;
  for (std::size_t i = 0; i < adj.node_count(); ++i) {
    next[i] = node_sum(adj, i, eps, weights, alpha, prev);
    max_change = std::max(max_change, change_of(next[i], prev[i]));
  }
  return max_change;
}

void contradiction_evidence(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                            double weight_threshold, std::span<double> out) {
  for (std::size_t i = 0; i < adj.node_count(); ++i) {
    out[i] = evidence_of(adj, i, eps, weights, weight_threshold);
  }
}

}  // namespace serial

namespace parallel {

void deviations(AdjacencyView adj, std::span<const double> observed, std::span<const double> inferred,
                std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(adj.edge_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < m; ++s) {
    const auto u = static_cast<std::size_t>(s);
    out[u] = std::abs(observed[adj.sources[u]] - inferred[u]);
  }
}

void edge_weights(std::span<const double> deviations, double k, std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(deviations.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < m; ++s) {
    const auto u = static_cast<std::size_t>(s);
    out[u] = weight_of(deviations[u], k);
  }
}

double fixed_point_step(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                        double alpha, std::span<const double> prev, std::span<double> next) {
  const auto n = static_cast<std::ptrdiff_t>(adj.node_count());
  double max_change = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_change)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    next[u] = node_sum(adj, u, eps, weights, alpha, prev);
    max_change = std::max(max_change, change_of(next[u], prev[u]));
  }
  return max_change;
}

void contradiction_evidence(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                            double weight_threshold, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(adj.node_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = evidence_of(adj, u, eps, weights, weight_threshold);
  }
}

}  // namespace parallel

void deviations(Execution exec, AdjacencyView adj, std::span<const double> observed,
                std::span<const double> inferred, std::span<double> out) {
  exec == Execution::parallel ? parallel::deviations(adj, observed, inferred, out)
                              : serial::deviations(adj, observed, inferred, out);
}

void edge_weights(Execution exec, std::span<const double> deviations, double k, std::span<double> out) {
  exec == Execution::parallel ? parallel::edge_weights(deviations, k, out)
                              : serial::edge_weights(deviations, k, out);
}

double fixed_point_step(Execution exec, AdjacencyView adj, std::span<const double> eps,
                        std::span<const double> weights, double alpha, std::span<const double> prev,
                        std::span<double> next) {
  return exec == Execution::parallel ? parallel::fixed_point_step(adj, eps, weights, alpha, prev, next)
                                     : serial::fixed_point_step(adj, eps, weights, alpha, prev, next);
}

void contradiction_evidence(Execution exec, AdjacencyView adj, std::span<const double> eps,
                            std::span<const double> weights, double weight_threshold, std::span<double> out) {
  exec == Execution::parallel ? parallel::contradiction_evidence(adj, eps, weights, weight_threshold, out)
                              : serial::contradiction_evidence(adj, eps, weights, weight_threshold, out);
}

}  // namespace trustconnect::kernels
