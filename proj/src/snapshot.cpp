#include "trustconnect/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trustconnect/errors.hpp"
#include "trustconnect/rng.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

std::string to_string(AttackMode mode) {
  switch (mode) {
    case AttackMode::self_injection: return "self-injection";
    case AttackMode::inference_corruption: return "inference-corruption";
    case AttackMode::both: return "both";
  }
  return "?";
}

AttackMode parse_attack_mode(std::string_view text) {
  if (text == "self-injection") return AttackMode::self_injection;
  if (text == "inference-corruption") return AttackMode::inference_corruption;
  if (text == "both") return AttackMode::both;
  throw std::invalid_argument("unknown attack mode '" + std::string(text) +
                              "' (expected self-injection, inference-corruption or both)");
}

void check_scenario(const DependencyGraph& graph, const ScenarioSpec& scenario) {
  if (!(scenario.noise_sigma >= 0.0) || !std::isfinite(scenario.noise_sigma)) {
    throw std::invalid_argument("noise_sigma must be a finite value >= 0");
  }
  for (const auto& [id, value] : scenario.ground_truth) {
    if (!graph.contains(id)) throw std::invalid_argument("scenario ground truth names unknown node " + std::to_string(id));
    if (!std::isfinite(value)) throw std::invalid_argument("ground truth for node " + std::to_string(id) + " is not finite");
  }
  if (scenario.attack) {
    if (!(scenario.attack->delta >= 0.0) || !std::isfinite(scenario.attack->delta)) {
      throw std::invalid_argument("attack delta must be a finite value >= 0");
    }
    for (NodeId id : scenario.attack->compromised) {
      if (!graph.contains(id)) throw std::invalid_argument("attack names unknown node " + std::to_string(id));
    }
  }
}

Snapshot synthesize_snapshot(const DependencyGraph& graph, const ScenarioSpec& scenario) {
  check_scenario(graph, scenario);
  auto truth = [&](NodeId id) {
    auto it = scenario.ground_truth.find(id);
    return it == scenario.ground_truth.end() ? 0.0 : it->second;
  };
  const AttackSpec* attack = scenario.attack ? &*scenario.attack : nullptr;
  auto lies_about_self = [&](NodeId id) {
    return attack && attack->mode != AttackMode::inference_corruption && attack->compromised.count(id);
  };
  auto lies_about_others = [&](NodeId id) {
    return attack && attack->mode != AttackMode::self_injection && attack->compromised.count(id);
  };

  Snapshot snap;
  for (const auto& n : graph.nodes()) {
    double v = truth(n.id);
    if (lies_about_self(n.id)) v += attack->delta;
    snap.observed.emplace(n.id, v);
  }
  SeededStream stream(scenario.seed);
  for (const auto& e : graph.edges()) {
    double v = truth(e.from);
    if (scenario.noise_sigma > 0.0) v += scenario.noise_sigma * stream.standard_normal();
    if (lies_about_others(e.to)) v += attack->delta;
    snap.inferred.emplace(e, v);
  }
  return snap;
}

Snapshot clean_snapshot(const DependencyGraph& graph) { return synthesize_snapshot(graph, ScenarioSpec{}); }

std::vector<std::string> check_completeness(const DependencyGraph& graph, const Snapshot& snapshot) {
  std::vector<std::string> problems;
  for (const auto& n : graph.nodes()) {
    if (!snapshot.observed.count(n.id)) problems.push_back("missing observed value for node " + std::to_string(n.id));
  }
  for (const auto& [id, v] : snapshot.observed) {
    if (!graph.contains(id)) problems.push_back("observed value for unknown node " + std::to_string(id));
  }
  for (const auto& e : graph.edges()) {
    if (!snapshot.inferred.count(e)) problems.push_back("missing inferred value for edge " + to_string(e));
  }
  for (const auto& [e, v] : snapshot.inferred) {
    // edges() is sorted, so binary search is enough
    auto edges = graph.edges();
    if (!std::binary_search(edges.begin(), edges.end(), e)) {
      problems.push_back("inferred value for edge " + to_string(e) + " not in graph");
    }
  }
  return problems;
}

AlignedSnapshot align(const DependencyGraph& graph, const Snapshot& snapshot) {
  auto problems = check_completeness(graph, snapshot);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  AlignedSnapshot out;
  out.observed.reserve(graph.node_count());
  for (const auto& n : graph.nodes()) out.observed.push_back(snapshot.observed.at(n.id));
  // std::map iterates in the same lexicographic order as graph.edges().
  out.inferred.reserve(graph.edge_count());
  for (const auto& [e, v] : snapshot.inferred) out.inferred.push_back(v);
  return out;
}

std::map<Edge, double> deviations(const DependencyGraph& graph, const Snapshot& snapshot) {
  auto problems = check_completeness(graph, snapshot);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  std::map<Edge, double> out;
  for (const auto& [e, inferred] : snapshot.inferred) {
    out.emplace_hint(out.end(), e, std::abs(snapshot.observed.at(e.from) - inferred));
  }
  return out;
}

std::string serialize_snapshot(const Snapshot& snapshot) {
  std::string out = "trustconnect-snapshot v1\n";
  for (const auto& [id, v] : snapshot.observed) {
    out += "obs " + std::to_string(id) + " " + format_double(v) + "\n";
  }
  for (const auto& [e, v] : snapshot.inferred) {
    out += "inf " + std::to_string(e.from) + " " + std::to_string(e.to) + " " + format_double(v) + "\n";
  }
  return out;
}

namespace {

NodeId field_id(const detail::Record& r, std::size_t i, const std::string& source) {
  try {
    auto v = parse_u64(r.fields[i]);
    if (v > 0xFFFFFFFFULL) throw std::invalid_argument("node id too large");
    return static_cast<NodeId>(v);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, r.line, "field " + std::to_string(i) + " of '" + r.fields[0] + "': " + e.what());
  }
}

double field_real(const detail::Record& r, std::size_t i, const std::string& source) {
  try {
    return parse_double(r.fields[i]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, r.line, "field " + std::to_string(i) + " of '" + r.fields[0] + "': " + e.what());
  }
}

void expect_arity(const detail::Record& r, std::size_t n, const std::string& source, const char* usage) {
  if (r.fields.size() != n) throw ParseError(source, r.line, std::string("expected: ") + usage);
}

}  // namespace

Snapshot parse_snapshot(std::string_view text, const std::string& source) {
  auto records = detail::tokenize_records(text);
  detail::expect_header(records, "trustconnect-snapshot v1", source);
  Snapshot snap;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields[0] == "obs") {
      expect_arity(rec, 3, source, "obs <i> <value>");
      if (!snap.observed.emplace(field_id(rec, 1, source), field_real(rec, 2, source)).second) {
        throw ParseError(source, rec.line, "duplicate 'obs' for node " + rec.fields[1]);
      }
    } else if (rec.fields[0] == "inf") {
      expect_arity(rec, 4, source, "inf <i> <j> <value>");
      Edge e{field_id(rec, 1, source), field_id(rec, 2, source)};
      if (!snap.inferred.emplace(e, field_real(rec, 3, source)).second) {
        throw ParseError(source, rec.line, "duplicate 'inf' for edge " + to_string(e));
      }
    } else {
      throw ParseError(source, rec.line, "unknown record '" + rec.fields[0] + "'");
    }
  }
  return snap;
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(detail::read_file(path), path.string());
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  detail::write_file(path, serialize_snapshot(snapshot));
}

std::string serialize_scenario(const ScenarioSpec& scenario) {
  std::string out = "trustconnect-scenario v1\n";
  out += "seed " + std::to_string(scenario.seed) + "\n";
  out += "noise_sigma " + format_double(scenario.noise_sigma) + "\n";
  for (const auto& [id, v] : scenario.ground_truth) {
    out += "truth " + std::to_string(id) + " " + format_double(v) + "\n";
  }
  if (scenario.attack) {
    out += "attack " + to_string(scenario.attack->mode) + " " + format_double(scenario.attack->delta) + "\n";
    for (NodeId id : scenario.attack->compromised) out += "compromised " + std::to_string(id) + "\n";
  }
  return out;
}

namespace detail {

bool apply_scenario_record(ScenarioSpec& scenario, const Record& rec, const std::string& source) {
  const auto& key = rec.fields[0];
  if (key == "seed") {
    expect_arity(rec, 2, source, "seed <u64>");
    try {
      scenario.seed = parse_u64(rec.fields[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, rec.line, std::string("field 'seed': ") + e.what());
    }
  } else if (key == "noise_sigma") {
    expect_arity(rec, 2, source, "noise_sigma <real>");
    scenario.noise_sigma = field_real(rec, 1, source);
  } else if (key == "truth") {
    expect_arity(rec, 3, source, "truth <i> <value>");
    if (!scenario.ground_truth.emplace(field_id(rec, 1, source), field_real(rec, 2, source)).second) {
      throw ParseError(source, rec.line, "duplicate 'truth' for node " + rec.fields[1]);
    }
  } else if (key == "attack") {
    expect_arity(rec, 3, source, "attack <mode> <delta>");
    if (scenario.attack) throw ParseError(source, rec.line, "duplicate 'attack' record");
    AttackSpec attack;
    try {
      attack.mode = parse_attack_mode(rec.fields[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, rec.line, e.what());
    }
    attack.delta = field_real(rec, 2, source);
    scenario.attack = attack;
  } else if (key == "compromised") {
    expect_arity(rec, 2, source, "compromised <i>");
    if (!scenario.attack) throw ParseError(source, rec.line, "'compromised' before 'attack' record");
    scenario.attack->compromised.insert(field_id(rec, 1, source));
  } else {
    return false;
  }
  return true;
}

}  // namespace detail

ScenarioSpec parse_scenario(std::string_view text, const std::string& source) {
  auto records = detail::tokenize_records(text);
  detail::expect_header(records, "trustconnect-scenario v1", source);
  ScenarioSpec scenario;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (!detail::apply_scenario_record(scenario, records[r], source)) {
      throw ParseError(source, records[r].line, "unknown record '" + records[r].fields[0] + "'");
    }
  }
  return scenario;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  return parse_scenario(detail::read_file(path), path.string());
}

void save_scenario(const ScenarioSpec& scenario, const std::filesystem::path& path) {
  detail::write_file(path, serialize_scenario(scenario));
}

}  // namespace trustconnect
