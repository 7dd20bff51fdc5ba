#pragma once

#include <string>
#include <vector>

#include "trustconnect/graph.hpp"
#include "trustconnect/snapshot.hpp"
#include "trustconnect/trust.hpp"

namespace trustconnect {

struct DetectorParams {
  /// An edge contradicts when its weight is below this. Open interval (0, 1).
  double weight_threshold = 0.5;
  /// A node is flagged when its evidence reaches this.
  double evidence_threshold = 1.0;

  void validate() const;
};

struct NodeDetection {
  NodeId id = 0;
  std::string label;
  double evidence = 0.0;
  bool flagged = false;
  std::vector<NodeId> contradicting_neighbors;  // ascending

  friend bool operator==(const NodeDetection&, const NodeDetection&) = default;
};

struct DetectionReport {
  std::vector<NodeDetection> nodes;  // ascending id
  std::vector<NodeId> ranking;       // descending evidence, ties by ascending id
  DetectorParams params;

  std::vector<NodeId> flagged() const;
};

/// Evidence against node i is the summed resilience of the out-neighbors j
/// whose weight W[i,j] falls below the weight threshold: contradictions from
/// hard-to-attack ECUs count more, those from epsilon-0 ECUs count nothing.
DetectionReport detect(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& trust_params,
                       const DetectorParams& det_params, Execution exec = Execution::parallel);

/// Header `id,evidence,flagged`.
std::string detection_to_csv(const DetectionReport& report);
std::string detection_to_json(const DetectionReport& report);
std::string detection_to_text(const DetectionReport& report);

}  // namespace trustconnect
