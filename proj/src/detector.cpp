#include "trustconnect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "trustconnect/kernels.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

void DetectorParams::validate() const {
  if (!(weight_threshold > 0.0 && weight_threshold < 1.0)) {
    throw std::invalid_argument("weight threshold must lie in (0,1), got " + format_double(weight_threshold));
  }
  if (!(evidence_threshold >= 0.0) || !std::isfinite(evidence_threshold)) {
    throw std::invalid_argument("evidence threshold must be a finite value >= 0, got " +
                                format_double(evidence_threshold));
  }
}

std::vector<NodeId> DetectionReport::flagged() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes) {
    if (n.flagged) out.push_back(n.id);
  }
  return out;
}

DetectionReport detect(const DependencyGraph& graph, const Snapshot& snapshot, const TrustParams& trust_params,
                       const DetectorParams& det_params, Execution exec) {
  trust_params.validate();
  det_params.validate();
  const auto devs = slot_deviations(graph, snapshot, exec);
  std::vector<double> weights(devs.size());
  kernels::edge_weights(exec, devs, trust_params.k, weights);

  const auto adj = kernels::adjacency(graph);
  std::vector<double> evidence(graph.node_count());
  kernels::contradiction_evidence(exec, adj, graph.epsilons(), weights, det_params.weight_threshold, evidence);

  DetectionReport report;
  report.params = det_params;
  const auto nodes = graph.nodes();
  report.nodes.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeDetection d{nodes[i].id, nodes[i].label, evidence[i], evidence[i] >= det_params.evidence_threshold, {}};
    for (std::size_t s = adj.offsets[i]; s < adj.offsets[i + 1]; ++s) {
      if (weights[s] < det_params.weight_threshold) d.contradicting_neighbors.push_back(nodes[adj.targets[s]].id);
    }
    report.nodes.push_back(std::move(d));
  }

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (evidence[a] != evidence[b]) return evidence[a] > evidence[b];
    return nodes[a].id < nodes[b].id;
  });
  report.ranking.reserve(order.size());
  for (auto i : order) report.ranking.push_back(nodes[i].id);
  return report;
}

std::string detection_to_csv(const DetectionReport& report) {
  std::string out = "id,evidence,flagged\n";
  for (const auto& n : report.nodes) {
    out += std::to_string(n.id) + "," + format_double(n.evidence) + "," + (n.flagged ? "true" : "false") + "\n";
  }
  return out;
}

std::string detection_to_json(const DetectionReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "trustconnect-detection v1";
  doc["params"] = {{"weight_threshold", report.params.weight_threshold},
                   {"evidence_threshold", report.params.evidence_threshold}};
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : report.nodes) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"evidence", n.evidence},
                     {"flagged", n.flagged},
                     {"contradicting_neighbors", n.contradicting_neighbors}});
  }
  doc["ranking"] = report.ranking;
  doc["flagged"] = report.flagged();
  return doc.dump(2) + "\n";
}

std::string detection_to_text(const DetectionReport& report) {
  std::string out = "trustconnect-detection v1\n";
  out += "# rank <position> <id> <label> <evidence> <flagged> <contradicting neighbors...>\n";
  std::size_t position = 1;
  for (NodeId id : report.ranking) {
    const auto& n = *std::find_if(report.nodes.begin(), report.nodes.end(),
                                  [id](const NodeDetection& d) { return d.id == id; });
    out += "rank " + std::to_string(position++) + " " + std::to_string(n.id) + " " + n.label + " " +
           format_double(n.evidence) + " " + (n.flagged ? "flagged" : "ok");
    for (NodeId j : n.contradicting_neighbors) out += " " + std::to_string(j);
    out += "\n";
  }
  out += "flagged_count " + std::to_string(report.flagged().size()) + "\n";
  return out;
}

}  // namespace trustconnect
