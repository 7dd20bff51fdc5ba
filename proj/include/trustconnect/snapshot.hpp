#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trustconnect/graph.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

/// Network state at one instant.
struct Snapshot {
  /// Value each ECU reports for itself.
  std::map<NodeId, double> observed;
  /// For edge (i, j): the value ECU j computes that ECU i should have.
  std::map<Edge, double> inferred;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

enum class AttackMode { self_injection, inference_corruption, both };

std::string to_string(AttackMode mode);
/// Accepts "self-injection", "inference-corruption", "both".
AttackMode parse_attack_mode(std::string_view text);

struct AttackSpec {
  std::set<NodeId> compromised;
  AttackMode mode = AttackMode::self_injection;
  double delta = 0.0;  // >= 0, added to every corrupted value

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

/// How a snapshot is synthesized. Nodes missing from ground_truth read 0.
struct ScenarioSpec {
  std::map<NodeId, double> ground_truth;
  double noise_sigma = 0.0;
  std::optional<AttackSpec> attack;
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Rejects unknown node ids, negative delta or noise.
void check_scenario(const DependencyGraph& graph, const ScenarioSpec& scenario);

/// observed[i] = truth[i] (+delta when i self-injects);
/// inferred[(i,j)] = truth[i] + N(0, sigma) (+delta when j corrupts inferences).
/// Noise is drawn from SeededStream(seed) in canonical edge order and only
/// when sigma > 0.
Snapshot synthesize_snapshot(const DependencyGraph& graph, const ScenarioSpec& scenario);

/// The no-attack, zero-noise snapshot: every inferred value equals the observed one.
Snapshot clean_snapshot(const DependencyGraph& graph);

/// Missing and unexpected entries relative to `graph`, in canonical order.
std::vector<std::string> check_completeness(const DependencyGraph& graph, const Snapshot& snapshot);

/// |observed[i] - inferred[(i,j)]| for every edge. Throws ValidationError on
/// an incomplete snapshot.
std::map<Edge, double> deviations(const DependencyGraph& graph, const Snapshot& snapshot);

/// Snapshot values laid out to match the graph's adjacency slots.
struct AlignedSnapshot {
  std::vector<double> observed;  // by node index
  std::vector<double> inferred;  // by adjacency slot
};

/// Throws ValidationError naming the first missing entries.
AlignedSnapshot align(const DependencyGraph& graph, const Snapshot& snapshot);

/// Canonical "trustconnect-snapshot v1" text.
std::string serialize_snapshot(const Snapshot& snapshot);
Snapshot parse_snapshot(std::string_view text, const std::string& source = "<snapshot>");
Snapshot load_snapshot(const std::filesystem::path& path);
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);

/// Canonical "trustconnect-scenario v1" text.
std::string serialize_scenario(const ScenarioSpec& scenario);
ScenarioSpec parse_scenario(std::string_view text, const std::string& source = "<scenario>");
ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& scenario, const std::filesystem::path& path);

namespace detail {
/// Applies one scenario record (truth/noise_sigma/seed/attack/compromised) and
/// returns false for keys it does not own. Shared with the sweep spec parser.
bool apply_scenario_record(ScenarioSpec& scenario, const Record& record,
                           const std::string& source);
}  // namespace detail

}  // namespace trustconnect
