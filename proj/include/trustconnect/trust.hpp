#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustconnect/graph.hpp"
#include "trustconnect/kernels.hpp"
#include "trustconnect/snapshot.hpp"

namespace trustconnect {

/// How neighbor scores C(j) are resolved while summing trust.
///
/// single_pass: nodes in ascending id order; C(j) is j's score from this pass
/// when j was already evaluated, otherwise the prior c0.
/// fixed_point: C starts at c0 everywhere and is replaced by the previous
/// iterate until the max-norm change drops below the tolerance.
enum class TrustMode { single_pass, fixed_point };

std::string to_string(TrustMode mode);
/// Accepts "single-pass" and "fixed-point".
TrustMode parse_trust_mode(std::string_view text);

struct TrustParams {
  double k = 1.0;      // deviation decay
  double alpha = 0.1;  // resilience amplification
  double c0 = 1.0;     // prior for not-yet-scored neighbors
  TrustMode mode = TrustMode::single_pass;
  int max_iterations = 100;
  double tolerance = 1e-9;

  /// Throws std::invalid_argument on k < 0, alpha < 0, tolerance <= 0,
  /// max_iterations < 1 or non-finite values.
  void validate() const;

  friend bool operator==(const TrustParams&, const TrustParams&) = default;
};

/// Per-node scores aligned with graph.nodes().
struct TrustScores {
  std::vector<double> values;
  bool converged = true;
  int iterations = 1;
};

/// exp(-k*d). Throws std::invalid_argument for negative inputs.
double edge_weight(double deviation, double k);

TrustScores trust_scores(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& params,
                         Execution exec = Execution::parallel);

/// Trust with every deviation zero (every weight exactly 1).
TrustScores baseline_trust(const DependencyGraph& graph, const TrustParams& params,
                           Execution exec = Execution::parallel);

/// Trust from precomputed per-slot weights; the common core of the two above.
TrustScores trust_from_weights(const DependencyGraph& graph, std::span<const double> weights,
                               const TrustParams& params, Execution exec = Execution::parallel);

/// Exposure-adjusted trust, epsilon*btv + (1-epsilon)*trust, kept inside
/// [min(btv, trust), max(btv, trust)]. Exact at epsilon 0 and 1.
double adjusted_trust(double btv, double trust, double epsilon);

struct TrustRow {
  NodeId id = 0;
  std::string label;
  double epsilon = 0.0;
  double btv = 0.0;
  double trust = 0.0;
  double eatv = 0.0;

  friend bool operator==(const TrustRow&, const TrustRow&) = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TrustReport {
  std::vector<TrustRow> rows;  // ascending id
  double network_trust = 1.0;
  TrustParams params;
  bool converged = true;           // trust scores
  bool baseline_converged = true;  // baseline scores
  int iterations = 1;
  Provenance provenance;

  friend bool operator==(const TrustReport&, const TrustReport&) = default;
};

/// Resilience-weighted mean of min(T, BTV)/BTV, each ratio clamped to [0, 1];
/// a node with BTV = 0 counts as 1. Falls back to the unweighted mean when all
/// resilience is zero, and is 1 for an empty graph.
double network_trust(std::span<const TrustRow> rows);

TrustReport full_report(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& params,
                        std::uint64_t seed = 0, Execution exec = Execution::parallel);

/// Per-slot deviations of `snapshot` against a valid graph.
std::vector<double> slot_deviations(const DependencyGraph& graph, const Snapshot& snapshot,
                                    Execution exec = Execution::parallel);

/// full_report() from precomputed slot deviations. Deviations do not depend on
/// (k, alpha), so a sweep computes them once.
TrustReport report_from_deviations(const DependencyGraph& graph, std::span<const double> deviations,
                                   const TrustParams& params, std::uint64_t seed = 0,
                                   Execution exec = Execution::parallel);

}  // namespace trustconnect
