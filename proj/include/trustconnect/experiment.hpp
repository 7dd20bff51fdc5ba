#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trustconnect/graph.hpp"
#include "trustconnect/snapshot.hpp"
#include "trustconnect/trust.hpp"

namespace trustconnect {

struct FixtureGraphSource {
  friend bool operator==(const FixtureGraphSource&, const FixtureGraphSource&) = default;
};
struct GraphFileSource {
  std::filesystem::path path;
  friend bool operator==(const GraphFileSource&, const GraphFileSource&) = default;
};
struct GeneratedGraphSource {
  std::size_t n = 20;
  double edge_probability = 0.15;
  EpsilonDistribution epsilon_distribution;
  std::uint64_t seed = 0;
  friend bool operator==(const GeneratedGraphSource&, const GeneratedGraphSource&) = default;
};
using GraphSource = std::variant<FixtureGraphSource, GraphFileSource, GeneratedGraphSource>;

DependencyGraph resolve_graph(const GraphSource& source);

std::vector<double> default_k_values();      // {0.1, 0.5, 1, 2}
std::vector<double> default_alpha_values();  // {0.05, 0.1, 0.2, 0.4}

struct SweepSpec {
  GraphSource graph_source;
  ScenarioSpec scenario;
  std::vector<double> k_values = default_k_values();
  std::vector<double> alpha_values = default_alpha_values();
  /// Mode, prior and iteration controls; k and alpha are taken from the grid.
  TrustParams base_params;

  /// Non-empty, ascending, finite, non-negative grids; valid base params.
  void validate() const;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SweepCell {
  double k = 0.0;
  double alpha = 0.0;
  TrustReport report;
};

struct SweepResult {
  DependencyGraph graph;
  Snapshot snapshot;
  std::vector<double> k_values;
  std::vector<double> alpha_values;
  std::vector<SweepCell> cells;  // k-major: cells[ki * alpha_values.size() + ai]
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;

  const SweepCell& cell(std::size_t k_index, std::size_t alpha_index) const;
};

/// Every (k, alpha) report on one graph and one snapshot. Cells are
/// independent and computed in parallel under Execution::parallel.
SweepResult run_sweep(const SweepSpec& spec, Execution exec = Execution::parallel);
SweepResult run_sweep(const DependencyGraph& graph, const ScenarioSpec& scenario, const SweepSpec& spec,
                      Execution exec = Execution::parallel);

/// The committed 20-node reproduction fixture and its attack scenario
/// (E1, E4 and E11, the exposed out-neighbors of E2, compromised in both modes).
struct PaperFixture {
  DependencyGraph graph;
  ScenarioSpec scenario;
};
PaperFixture paper_fixture();

/// Pinned hash of the fixture graph; changes only with a fixture version bump.
std::uint64_t paper_fixture_graph_hash();

inline constexpr std::uint64_t kPaperFixtureSeed = 20250117;

/// Re-runs the procedure that produced the committed fixture: a seeded random
/// graph with the named ECUs' edges and resilience forced to the required
/// shape. The fixture files were written from this and then frozen.
PaperFixture derive_paper_fixture(std::uint64_t seed = kPaperFixtureSeed);

/// Default sweep on the fixture: 4x4 grid, single-pass.
SweepSpec default_fixture_sweep();

struct NarrativeCell {
  double k = 0.0;
  double alpha = 0.0;
  bool bound_ok = false;          // |EATV-BTV| <= (1-eps)|BTV-T| + 1e-12 for every node
  bool ordering_ok = false;       // resilient relative gaps < exposed relative gaps (or vacuous)
  bool ordering_vacuous = false;  // one of the groups has BTV == T throughout
  double max_resilient_gap = 0.0;
  double min_exposed_gap = 0.0;
};

struct NarrativeSummary {
  std::vector<NarrativeCell> cells;
  bool passed() const;            // every bound and ordering check holds
  bool all_non_vacuous() const;
};

/// Resilient group {E5, E13, E18}, exposed group {E2, E9}.
/// Throws std::invalid_argument when `result` was not produced on the fixture.
NarrativeSummary narrative_check(const SweepResult& result);

/// "sweep_k<k>_a<alpha>", numbers in shortest round-trip form.
std::string cell_stem(double k, double alpha);

/// One CSV and one SVG per cell plus manifest.txt, written in canonical order.
/// Returns the written paths. Throws IoError naming the failing path.
std::vector<std::filesystem::path> emit_figure_data(const SweepResult& result, const std::filesystem::path& out_dir);

/// "trustconnect-sweep v1" documents. Relative graph/scenario file paths are
/// resolved against `base_dir`.
std::string serialize_sweep_spec(const SweepSpec& spec);
SweepSpec parse_sweep_spec(std::string_view text, const std::string& source = "<sweep>",
                           const std::filesystem::path& base_dir = {});
SweepSpec load_sweep_spec(const std::filesystem::path& path);

}  // namespace trustconnect
