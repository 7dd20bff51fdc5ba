#include "trustconnect/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trustconnect/text_format.hpp"

namespace trustconnect {

std::string to_string(TrustMode mode) {
  return mode == TrustMode::single_pass ? "single-pass" : "fixed-point";
}

TrustMode parse_trust_mode(std::string_view text) {
  if (text == "single-pass") return TrustMode::single_pass;
  if (text == "fixed-point") return TrustMode::fixed_point;
  throw std::invalid_argument("unknown trust mode '" + std::string(text) +
                              "' (expected single-pass or fixed-point)");
}

void TrustParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(k >= 0.0) || !std::isfinite(k)) fail("k must be a finite value >= 0, got " + format_double(k));
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be a finite value >= 0, got " + format_double(alpha));
  if (!std::isfinite(c0)) fail("c0 must be finite");
  if (!(tolerance > 0.0)) fail("tolerance must be > 0, got " + format_double(tolerance));
  if (max_iterations < 1) fail("max_iterations must be >= 1");
}

double edge_weight(double deviation, double k) {
  if (!(deviation >= 0.0)) throw std::invalid_argument("deviation must be >= 0, got " + format_double(deviation));
  if (!(k >= 0.0)) throw std::invalid_argument("k must be >= 0, got " + format_double(k));
  return kernels::weight_of(deviation, k);
}

TrustScores trust_from_weights(const DependencyGraph& graph, std::span<const double> weights,
                               const TrustParams& params, Execution exec) {
  params.validate();
  const auto adj = kernels::adjacency(graph);
  if (weights.size() != adj.edge_count()) throw std::invalid_argument("weights do not match the graph's edges");
  const auto eps = graph.epsilons();

  TrustScores scores;
  scores.values.assign(graph.node_count(), 0.0);
  if (params.mode == TrustMode::single_pass) {
    kernels::serial::single_pass_trust(adj, eps, weights, params.alpha, params.c0, scores.values);
    return scores;
  }

  // Last iterate ends up in scores.values whether or not the loop converges.
  std::vector<double> prev(graph.node_count(), params.c0);
  scores.converged = false;
  for (int it = 1; it <= params.max_iterations; ++it) {
    const double change = kernels::fixed_point_step(exec, adj, eps, weights, params.alpha, prev, scores.values);
    scores.iterations = it;
    if (!std::isfinite(change)) break;
    if (change < params.tolerance) {
      scores.converged = true;
      break;
    }
    if (it < params.max_iterations) prev.swap(scores.values);
  }
  return scores;
}

std::vector<double> slot_deviations(const DependencyGraph& graph, const Snapshot& snapshot, Execution exec) {
  require_valid(graph);
  const auto aligned = align(graph, snapshot);
  std::vector<double> out(graph.edge_count());
  kernels::deviations(exec, kernels::adjacency(graph), aligned.observed, aligned.inferred, out);
  return out;
}

TrustScores trust_scores(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& params,
                         Execution exec) {
  params.validate();
  const auto devs = slot_deviations(graph, snapshot, exec);
  std::vector<double> weights(devs.size());
  kernels::edge_weights(exec, devs, params.k, weights);
  return trust_from_weights(graph, weights, params, exec);
}

TrustScores baseline_trust(const DependencyGraph& graph, const TrustParams& params, Execution exec) {
  require_valid(graph);
  const std::vector<double> ones(graph.edge_count(), 1.0);
  return trust_from_weights(graph, ones, params, exec);
}

double adjusted_trust(double btv, double trust, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon out of range [0,1]: " + format_double(epsilon));
  }
  const double blended = epsilon * btv + (1.0 - epsilon) * trust;
  if (!std::isfinite(blended) || !std::isfinite(btv) || !std::isfinite(trust)) return blended;
  return std::clamp(blended, std::min(btv, trust), std::max(btv, trust));
}

double network_trust(std::span<const TrustRow> rows) {
  if (rows.empty()) return 1.0;
  double weighted = 0.0;
  double total_eps = 0.0;
  double plain = 0.0;
  for (const auto& r : rows) {
    double ratio = 1.0;
    if (r.btv > 0.0) ratio = std::clamp(std::min(r.trust, r.btv) / r.btv, 0.0, 1.0);
    weighted += r.epsilon * ratio;
    total_eps += r.epsilon;
    plain += ratio;
  }
  if (total_eps > 0.0) return weighted / total_eps;
  return plain / static_cast<double>(rows.size());
}

TrustReport report_from_deviations(const DependencyGraph& graph, std::span<const double> deviations,
                                   const TrustParams& params, std::uint64_t seed, Execution exec) {
  params.validate();
  std::vector<double> weights(deviations.size());
  kernels::edge_weights(exec, deviations, params.k, weights);
  const auto trust = trust_from_weights(graph, weights, params, exec);
  const auto base = baseline_trust(graph, params, exec);

  TrustReport report;
  report.params = params;
  report.converged = trust.converged;
  report.baseline_converged = base.converged;
  report.iterations = trust.iterations;
  report.provenance = {seed, graph_hash(graph)};
  report.rows.reserve(graph.node_count());
  const auto nodes = graph.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double eps = nodes[i].epsilon;
    report.rows.push_back({nodes[i].id, nodes[i].label, eps, base.values[i], trust.values[i],
                           adjusted_trust(base.values[i], trust.values[i], eps)});
  }
  report.network_trust = network_trust(report.rows);
  return report;
}

TrustReport full_report(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& params,
                        std::uint64_t seed, Execution exec) {
  params.validate();
  const auto devs = slot_deviations(graph, snapshot, exec);
  return report_from_deviations(graph, devs, params, seed, exec);
}

}  // namespace trustconnect
