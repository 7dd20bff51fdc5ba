#include "trustconnect/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "trustconnect/errors.hpp"
#include "trustconnect/rng.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

std::string to_string(const Edge& edge) {
  return "(" + std::to_string(edge.from) + "," + std::to_string(edge.to) + ")";
}

DependencyGraph::DependencyGraph(std::vector<EcuNode> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const EcuNode& a, const EcuNode& b) { return a.id < b.id; });
  std::stable_sort(edges_.begin(), edges_.end());

  epsilons_.reserve(nodes_.size());
  for (const auto& n : nodes_) epsilons_.push_back(n.epsilon);

  offsets_.assign(nodes_.size() + 1, 0);
  targets_.reserve(edges_.size());
  sources_.reserve(edges_.size());
  for (const auto& e : edges_) {
    auto from = index_of(e.from);
    auto to = index_of(e.to);
    if (!from || !to) continue;
    targets_.push_back(*to);
    sources_.push_back(*from);
    ++offsets_[*from + 1];
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] += offsets_[i];
}

std::optional<std::size_t> DependencyGraph::index_of(NodeId id) const noexcept {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const EcuNode& n, NodeId value) { return n.id < value; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

const EcuNode& DependencyGraph::node(NodeId id) const {
  auto idx = index_of(id);
  if (!idx) throw std::invalid_argument("unknown node id " + std::to_string(id));
  return nodes_[*idx];
}

namespace {

bool label_ok(const std::string& label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#';
  });
}

}  // namespace

std::vector<std::string> validate(const DependencyGraph& graph) {
  std::vector<std::string> violations;
  const auto nodes = graph.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (i > 0 && nodes[i - 1].id == n.id) {
      violations.push_back("duplicate node id " + std::to_string(n.id));
    }
    if (!(n.epsilon >= 0.0 && n.epsilon <= 1.0)) {
      violations.push_back("epsilon out of range at node " + std::to_string(n.id) + " (" +
                           format_double(n.epsilon) + ")");
    }
    if (!label_ok(n.label)) {
      violations.push_back("invalid label at node " + std::to_string(n.id) + " ('" + n.label + "')");
    }
  }
  const auto edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.from == e.to) violations.push_back("self-loop at node " + std::to_string(e.from));
    if (i > 0 && edges[i - 1] == e) violations.push_back("duplicate edge " + to_string(e));
    for (NodeId end : {e.from, e.to}) {
      if (!graph.contains(end)) {
        violations.push_back("dangling edge " + to_string(e) + ": node " + std::to_string(end) +
                             " absent");
        if (e.from == e.to) break;
      }
    }
  }
  return violations;
}

void require_valid(const DependencyGraph& graph) {
  auto violations = validate(graph);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

std::vector<NodeId> out_neighbors(const DependencyGraph& graph, NodeId i) {
  auto idx = graph.index_of(i);
  if (!idx) throw std::invalid_argument("unknown node id " + std::to_string(i));
  const auto offsets = graph.adjacency_offsets();
  const auto targets = graph.adjacency_targets();
  std::vector<NodeId> result;
  for (std::size_t s = offsets[*idx]; s < offsets[*idx + 1]; ++s) {
    result.push_back(graph.nodes()[targets[s]].id);
  }
  return result;
}

EpsilonDistribution EpsilonDistribution::parse(std::string_view text) {
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("bad epsilon distribution '" + std::string(text) + "': " + why);
  };
  EpsilonDistribution dist;
  if (text == "uniform") return uniform();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad("expected uniform, uniform:LO,HI or constant:V");
  auto kind = text.substr(0, colon);
  auto args = text.substr(colon + 1);
  try {
    if (kind == "uniform") {
      auto comma = args.find(',');
      if (comma == std::string_view::npos) throw bad("uniform needs LO,HI");
      dist = uniform(parse_double(args.substr(0, comma)), parse_double(args.substr(comma + 1)));
    } else if (kind == "constant") {
      dist = constant(parse_double(args));
    } else {
      throw bad("unknown kind '" + std::string(kind) + "'");
    }
  } catch (const std::invalid_argument& e) {
    if (std::string_view(e.what()).starts_with("bad epsilon")) throw;
    throw bad(e.what());
  }
  if (!(dist.low >= 0.0 && dist.high <= 1.0 && dist.low <= dist.high)) {
    throw bad("bounds must satisfy 0 <= lo <= hi <= 1");
  }
  return dist;
}

std::string EpsilonDistribution::to_string() const {
  if (kind == Kind::constant) return "constant:" + format_double(low);
  return "uniform:" + format_double(low) + "," + format_double(high);
}

DependencyGraph generate_random(std::size_t n, double edge_probability,
                                const EpsilonDistribution& epsilon_distribution,
                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0,1], got " +
                                format_double(edge_probability));
  }
  SeededStream stream(seed);
  std::vector<EcuNode> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eps = epsilon_distribution.low;
    if (epsilon_distribution.kind == EpsilonDistribution::Kind::uniform) {
      eps = epsilon_distribution.low +
            (epsilon_distribution.high - epsilon_distribution.low) * stream.uniform01();
    }
    nodes.push_back({static_cast<NodeId>(i), "E" + std::to_string(i), eps});
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (stream.uniform01() < edge_probability) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  return DependencyGraph(std::move(nodes), std::move(edges));
}

std::string serialize_graph(const DependencyGraph& graph) {
  std::string out = "trustconnect-graph v1\n";
  out += "nodes " + std::to_string(graph.node_count()) + "\n";
  for (const auto& n : graph.nodes()) {
    out += "node " + std::to_string(n.id) + " " + n.label + " " + format_double(n.epsilon) + "\n";
  }
  out += "edges " + std::to_string(graph.edge_count()) + "\n";
  for (const auto& e : graph.edges()) {
    out += "edge " + std::to_string(e.from) + " " + std::to_string(e.to) + "\n";
  }
  return out;
}

namespace {

NodeId parse_node_id(const std::string& token, const std::string& source, std::size_t line,
                     const char* field) {
  try {
    auto v = parse_u64(token);
    if (v > 0xFFFFFFFFULL) throw std::invalid_argument("node id too large");
    return static_cast<NodeId>(v);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line, std::string("field '") + field + "': " + e.what());
  }
}

std::size_t parse_count(const detail::Record& r, const std::string& source) {
  if (r.fields.size() != 2) throw ParseError(source, r.line, "'" + r.fields[0] + "' takes one count");
  try {
    return static_cast<std::size_t>(parse_u64(r.fields[1]));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, r.line, "field '" + r.fields[0] + "': " + e.what());
  }
}

}  // namespace

DependencyGraph parse_graph(std::string_view text, const std::string& source) {
  auto records = detail::tokenize_records(text);
  detail::expect_header(records, "trustconnect-graph v1", source);

  std::optional<std::size_t> declared_nodes;
  std::optional<std::size_t> declared_edges;
  std::vector<EcuNode> nodes;
  std::vector<Edge> edges;
  std::size_t last_line = records.back().line;

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto& key = rec.fields[0];
    if (key == "nodes") {
      if (declared_nodes) throw ParseError(source, rec.line, "duplicate 'nodes' key");
      declared_nodes = parse_count(rec, source);
    } else if (key == "edges") {
      if (declared_edges) throw ParseError(source, rec.line, "duplicate 'edges' key");
      declared_edges = parse_count(rec, source);
    } else if (key == "node") {
      if (!declared_nodes) throw ParseError(source, rec.line, "'node' record before 'nodes' key");
      if (rec.fields.size() != 4) throw ParseError(source, rec.line, "'node' expects: node <id> <label> <epsilon>");
      EcuNode n;
      n.id = parse_node_id(rec.fields[1], source, rec.line, "id");
      n.label = rec.fields[2];
      try {
        n.epsilon = parse_double(rec.fields[3]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, rec.line, std::string("field 'epsilon': ") + e.what());
      }
      nodes.push_back(std::move(n));
    } else if (key == "edge") {
      if (!declared_edges) throw ParseError(source, rec.line, "'edge' record before 'edges' key");
      if (rec.fields.size() != 3) throw ParseError(source, rec.line, "'edge' expects: edge <i> <j>");
      edges.push_back({parse_node_id(rec.fields[1], source, rec.line, "i"),
                       parse_node_id(rec.fields[2], source, rec.line, "j")});
    } else {
      throw ParseError(source, rec.line, "unknown record '" + key + "'");
    }
  }
  if (!declared_nodes) throw ParseError(source, last_line, "missing 'nodes' key");
  if (!declared_edges) throw ParseError(source, last_line, "missing 'edges' key");
  if (nodes.size() != *declared_nodes) {
    throw ParseError(source, last_line,
                     "'nodes' declares " + std::to_string(*declared_nodes) + " but " +
                         std::to_string(nodes.size()) + " node records found");
  }
  if (edges.size() != *declared_edges) {
    throw ParseError(source, last_line,
                     "'edges' declares " + std::to_string(*declared_edges) + " but " +
                         std::to_string(edges.size()) + " edge records found");
  }
  DependencyGraph graph(std::move(nodes), std::move(edges));
  require_valid(graph);
  return graph;
}

DependencyGraph load_graph(const std::filesystem::path& path) {
  return parse_graph(detail::read_file(path), path.string());
}

void save_graph(const DependencyGraph& graph, const std::filesystem::path& path) {
  detail::write_file(path, serialize_graph(graph));
}

std::uint64_t graph_hash(const DependencyGraph& graph) { return fnv1a64(serialize_graph(graph)); }

}  // namespace trustconnect
