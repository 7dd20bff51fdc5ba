#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trustconnect {

using NodeId = std::uint32_t;

/// One ECU. `epsilon` is its resilience to remote injection:
/// 1 means hard to attack, 0 means easy to attack.
struct EcuNode {
  NodeId id = 0;
  std::string label;
  double epsilon = 0.0;

  friend bool operator==(const EcuNode&, const EcuNode&) = default;
};

/// Dependency edge: `from` depends on the value of `to`, i.e. `to` can infer
/// what `from` should read.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::string to_string(const Edge& edge);

/// Directed ECU dependency graph, immutable after construction.
///
/// Nodes are kept in ascending id order and edges in lexicographic order, so
/// two graphs with the same content compare equal and serialize identically.
/// Construction does not reject invariant violations (see validate()); the
/// adjacency index simply skips edges whose endpoints are unknown.
class DependencyGraph {
 public:
  DependencyGraph() = default;
  DependencyGraph(std::vector<EcuNode> nodes, std::vector<Edge> edges);

  std::span<const EcuNode> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::size_t> index_of(NodeId id) const noexcept;
  bool contains(NodeId id) const noexcept { return index_of(id).has_value(); }
  /// Throws std::invalid_argument for an unknown id.
  const EcuNode& node(NodeId id) const;

  // Compressed adjacency over node indices. For a valid graph, adjacency slot
  // s corresponds to edges()[s].
  std::span<const std::size_t> adjacency_offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> adjacency_targets() const noexcept { return targets_; }
  std::span<const std::size_t> adjacency_sources() const noexcept { return sources_; }
  std::span<const double> epsilons() const noexcept { return epsilons_; }

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<EcuNode> nodes_;
  std::vector<Edge> edges_;
  std::vector<double> epsilons_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> sources_;
};

/// Every invariant violation, nodes first (by id) then edges (lexicographic).
std::vector<std::string> validate(const DependencyGraph& graph);

/// Throws ValidationError when validate() is non-empty.
void require_valid(const DependencyGraph& graph);

/// Ascending ids of all j with an edge (i, j).
std::vector<NodeId> out_neighbors(const DependencyGraph& graph, NodeId i);

/// How per-node resilience is drawn by generate_random().
struct EpsilonDistribution {
  enum class Kind { uniform, constant };
  Kind kind = Kind::uniform;
  double low = 0.0;   // uniform lower bound, or the constant value
  double high = 1.0;  // uniform upper bound

  static EpsilonDistribution uniform(double low = 0.0, double high = 1.0) {
    return {Kind::uniform, low, high};
  }
  static EpsilonDistribution constant(double value) { return {Kind::constant, value, value}; }

  /// Accepts "uniform", "uniform:LO,HI" and "constant:V".
  static EpsilonDistribution parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const EpsilonDistribution&, const EpsilonDistribution&) = default;
};

/// Seeded directed random graph on ids 0..n-1 labeled "E<id>".
///
/// Draw order from one SeededStream(seed): first one epsilon per node in id
/// order, then one uniform per ordered pair (i, j), i != j, visited i-major
/// and j ascending; the pair becomes an edge when the uniform is < p.
DependencyGraph generate_random(std::size_t n, double edge_probability,
                                const EpsilonDistribution& epsilon_distribution,
                                std::uint64_t seed);

/// Canonical "trustconnect-graph v1" text.
std::string serialize_graph(const DependencyGraph& graph);
/// Parses and validates; throws ParseError or ValidationError.
DependencyGraph parse_graph(std::string_view text, const std::string& source = "<graph>");

DependencyGraph load_graph(const std::filesystem::path& path);
void save_graph(const DependencyGraph& graph, const std::filesystem::path& path);

/// FNV-1a of the canonical serialization.
std::uint64_t graph_hash(const DependencyGraph& graph);

}  // namespace trustconnect
