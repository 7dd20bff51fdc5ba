#pragma once

// Data-parallel inner loops of the trust engine and detector.
//
// Every kernel exists as a serial reference (kernels::serial) and an OpenMP
// version (kernels::parallel). Each output element is produced by exactly one
// thread with the same operation order as the serial loop, so the two are
// bitwise identical; tests/test_kernels.cpp holds them to that.
//
// Single-pass trust has a sequential dependency (node i reads the scores of
// lower-id neighbors from the same pass) and has only a serial form.

#include <cstddef>
#include <span>

#include "trustconnect/graph.hpp"

namespace trustconnect {

enum class Execution { serial, parallel };

namespace kernels {

/// Compressed adjacency of a valid graph: slots offsets[i]..offsets[i+1] are
/// the out-edges of node index i.
struct AdjacencyView {
  std::span<const std::size_t> offsets;
  std::span<const std::size_t> targets;
  std::span<const std::size_t> sources;

  std::size_t node_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const noexcept { return targets.size(); }
};

AdjacencyView adjacency(const DependencyGraph& graph) noexcept;

bool openmp_enabled() noexcept;
int max_threads() noexcept;

/// exp(-(k*d)), the per-edge agreement weight.
inline double weight_of(double deviation, double k) noexcept;

namespace serial {

void deviations(AdjacencyView adj, std::span<const double> observed, std::span<const double> inferred,
                std::span<double> out);
void edge_weights(std::span<const double> deviations, double k, std::span<double> out);

/// Nodes in index order; neighbor j contributes eps[j]*alpha*C(j) + W, where
/// C(j) is this pass's score when j < i and `prior` otherwise.
void single_pass_trust(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                       double alpha, double prior, std::span<double> out);

/// One Jacobi sweep: next[i] = sum_j eps[j]*alpha*prev[j] + W[i,j].
/// Returns max |next - prev|, or +inf when any score is non-finite.
double fixed_point_step(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                        double alpha, std::span<const double> prev, std::span<double> next);

/// Sum of eps[j] over out-edges whose weight is below `weight_threshold`.
void contradiction_evidence(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                            double weight_threshold, std::span<double> out);

}  // namespace serial

namespace parallel {

void deviations(AdjacencyView adj, std::span<const double> observed, std::span<const double> inferred,
                std::span<double> out);
void edge_weights(std::span<const double> deviations, double k, std::span<double> out);
double fixed_point_step(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                        double alpha, std::span<const double> prev, std::span<double> next);
void contradiction_evidence(AdjacencyView adj, std::span<const double> eps, std::span<const double> weights,
                            double weight_threshold, std::span<double> out);

}  // namespace parallel

// Dispatch helpers.
void deviations(Execution exec, AdjacencyView adj, std::span<const double> observed,
                std::span<const double> inferred, std::span<double> out);
void edge_weights(Execution exec, std::span<const double> deviations, double k, std::span<double> out);
double fixed_point_step(Execution exec, AdjacencyView adj, std::span<const double> eps,
                        std::span<const double> weights, double alpha, std::span<const double> prev,
                        std::span<double> next);
void contradiction_evidence(Execution exec, AdjacencyView adj, std::span<const double> eps,
                            std::span<const double> weights, double weight_threshold, std::span<double> out);

}  // namespace kernels
}  // namespace trustconnect

#include <cmath>

inline double trustconnect::kernels::weight_of(double deviation, double k) noexcept {
  return std::exp(-(k * deviation));
}
