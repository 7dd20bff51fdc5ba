#include "trustconnect/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <stdexcept>
#include <system_error>

#include "trustconnect/errors.hpp"
#include "trustconnect/kernels.hpp"
#include "trustconnect/report_io.hpp"
#include "trustconnect/rng.hpp"
#include "trustconnect/svg.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

namespace detail {
extern const std::string_view kFixtureGraphText;
extern const std::string_view kFixtureScenarioText;
}  // namespace detail

DependencyGraph resolve_graph(const GraphSource& source) {
  if (std::holds_alternative<FixtureGraphSource>(source)) return paper_fixture().graph;
  if (const auto* file = std::get_if<GraphFileSource>(&source)) return load_graph(file->path);
  const auto& gen = std::get<GeneratedGraphSource>(source);
  return generate_random(gen.n, gen.edge_probability, gen.epsilon_distribution, gen.seed);
}

std::vector<double> default_k_values() { return {0.1, 0.5, 1.0, 2.0}; }
std::vector<double> default_alpha_values() { return {0.05, 0.1, 0.2, 0.4}; }

namespace {

void check_grid(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(name) + " values must be finite and >= 0");
    }
    if (i > 0 && !(values[i - 1] < values[i])) {
      throw std::invalid_argument(std::string(name) + " values must be strictly ascending");
    }
  }
}

}  // namespace

void SweepSpec::validate() const {
  check_grid(k_values, "k");
  check_grid(alpha_values, "alpha");
  base_params.validate();
}

const SweepCell& SweepResult::cell(std::size_t k_index, std::size_t alpha_index) const {
  if (k_index >= k_values.size() || alpha_index >= alpha_values.size()) throw std::out_of_range("sweep cell index");
  return cells[k_index * alpha_values.size() + alpha_index];
}

SweepResult run_sweep(const SweepSpec& spec, Execution exec) {
  spec.validate();
  return run_sweep(resolve_graph(spec.graph_source), spec.scenario, spec, exec);
}

SweepResult run_sweep(const DependencyGraph& graph, const ScenarioSpec& scenario, const SweepSpec& spec,
                      Execution exec) {
  spec.validate();
  require_valid(graph);

  SweepResult result;
  result.graph = graph;
  result.snapshot = synthesize_snapshot(graph, scenario);
  result.k_values = spec.k_values;
  result.alpha_values = spec.alpha_values;
  result.seed = scenario.seed;
  result.graph_hash = graph_hash(graph);

  const auto devs = slot_deviations(result.graph, result.snapshot, exec);
  const std::size_t na = spec.alpha_values.size();
  result.cells.resize(spec.k_values.size() * na);

  auto compute = [&](std::size_t c) {
    TrustParams params = spec.base_params;
    params.k = spec.k_values[c / na];
    params.alpha = spec.alpha_values[c % na];
    result.cells[c] = {params.k, params.alpha,
                       report_from_deviations(result.graph, devs, params, scenario.seed, Execution::serial)};
  };

  if (exec == Execution::serial) {
    for (std::size_t c = 0; c < result.cells.size(); ++c) compute(c);
    return result;
  }

  std::exception_ptr failure;
  const auto total = static_cast<std::ptrdiff_t>(result.cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < total; ++c) {
    try {
      compute(static_cast<std::size_t>(c));
    } catch (...) {
#pragma omp critical(trustconnect_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

PaperFixture paper_fixture() {
  return {parse_graph(detail::kFixtureGraphText, "paper_fixture.tcg"),
          parse_scenario(detail::kFixtureScenarioText, "paper_fixture.scenario")};
}

std::uint64_t paper_fixture_graph_hash() { return graph_hash(paper_fixture().graph); }

namespace {

constexpr NodeId kResilient[] = {5, 13, 18};
constexpr NodeId kExposed[] = {2, 9};
constexpr NodeId kCompromised[] = {1, 4, 11};

void force_out_degree(std::set<Edge>& edges, NodeId node, std::size_t degree, std::size_t n, NodeId keep) {
  std::vector<NodeId> current;
  for (const auto& e : edges) {
    if (e.from == node) current.push_back(e.to);
  }
  // Drop highest ids first, never the pinned neighbor.
  while (current.size() > degree) {
    auto victim = std::find_if(current.rbegin(), current.rend(), [keep](NodeId j) { return j != keep; });
    edges.erase({node, *victim});
    current.erase(std::next(victim).base());
  }
  for (NodeId j = 0; j < n && current.size() < degree; ++j) {
    if (j == node || edges.count({node, j})) continue;
    edges.insert({node, j});
    current.push_back(j);
  }
}

}  // namespace

PaperFixture derive_paper_fixture(std::uint64_t seed) {
  constexpr std::size_t n = 20;
  const auto base = generate_random(n, 0.15, EpsilonDistribution::uniform(), seed);

  std::vector<EcuNode> nodes(base.nodes().begin(), base.nodes().end());
  auto in = [](NodeId id, std::span<const NodeId> group) {
    return std::find(group.begin(), group.end(), id) != group.end();
  };
  for (auto& node : nodes) {
    // E17 is the fourth low-chance-of-attack neighbor of E2.
    if (in(node.id, kResilient) || node.id == 17) node.epsilon = 0.9 + 0.1 * node.epsilon;
    if (in(node.id, kExposed) || in(node.id, kCompromised)) node.epsilon = 0.3 * node.epsilon;
  }

  std::set<Edge> edges(base.edges().begin(), base.edges().end());
  std::erase_if(edges, [](const Edge& e) { return e.from == 2; });
  for (NodeId j : {1u, 4u, 5u, 11u, 13u, 17u}) edges.insert({2, j});

  // Every node in the two narrative groups depends on at least one compromised ECU.
  for (NodeId r : {5u, 9u, 13u, 18u}) {
    NodeId pinned = 0;
    bool has = false;
    for (NodeId c : kCompromised) {
      if (edges.count({r, c})) {
        pinned = c;
        has = true;
        break;
      }
    }
    if (!has) {
      pinned = kCompromised[r % 3];
      edges.insert({r, pinned});
    }
    if (r == 5) force_out_degree(edges, r, 3, n, pinned);
    if (r == 13 || r == 18) force_out_degree(edges, r, 4, n, pinned);
  }

  PaperFixture fixture{DependencyGraph(std::move(nodes), std::vector<Edge>(edges.begin(), edges.end())), {}};

  auto& scenario = fixture.scenario;
  scenario.seed = seed + 1;
  scenario.noise_sigma = 0.05;
  SeededStream truth_stream(seed + 2);
  for (NodeId i = 0; i < n; ++i) {
    // Multiples of 1/8 keep observed - inferred exact in the noise-free case.
    scenario.ground_truth[i] = std::round(truth_stream.uniform01() * 800.0) / 8.0;
  }
  scenario.attack = AttackSpec{{std::begin(kCompromised), std::end(kCompromised)}, AttackMode::both, 2.0};
  return fixture;
}

SweepSpec default_fixture_sweep() {
  SweepSpec spec;
  spec.graph_source = FixtureGraphSource{};
  spec.scenario = paper_fixture().scenario;
  return spec;
}

bool NarrativeSummary::passed() const {
  return !cells.empty() &&
         std::all_of(cells.begin(), cells.end(), [](const NarrativeCell& c) { return c.bound_ok && c.ordering_ok; });
}

bool NarrativeSummary::all_non_vacuous() const {
  return std::none_of(cells.begin(), cells.end(), [](const NarrativeCell& c) { return c.ordering_vacuous; });
}

NarrativeSummary narrative_check(const SweepResult& result) {
  if (result.graph_hash != paper_fixture_graph_hash()) {
    throw std::invalid_argument("narrative_check: sweep was not run on the paper fixture (graph hash " +
                                hex64(result.graph_hash) + ")");
  }
  NarrativeSummary summary;
  for (const auto& cell : result.cells) {
    const auto& rows = cell.report.rows;
    auto row_of = [&](NodeId id) -> const TrustRow& {
      return *std::find_if(rows.begin(), rows.end(), [id](const TrustRow& r) { return r.id == id; });
    };
    auto relative_gap = [](const TrustRow& r) { return std::abs(r.eatv - r.btv) / std::max(r.btv, 1e-12); };

    NarrativeCell out{cell.k, cell.alpha};
    out.bound_ok = std::all_of(rows.begin(), rows.end(), [](const TrustRow& r) {
      return std::abs(r.eatv - r.btv) <= (1.0 - r.epsilon) * std::abs(r.btv - r.trust) + 1e-12;
    });

    bool resilient_moved = false, exposed_moved = false;
    out.max_resilient_gap = 0.0;
    for (NodeId id : kResilient) {
      const auto& r = row_of(id);
      resilient_moved |= r.btv != r.trust;
      out.max_resilient_gap = std::max(out.max_resilient_gap, relative_gap(r));
    }
    out.min_exposed_gap = std::numeric_limits<double>::infinity();
    for (NodeId id : kExposed) {
      const auto& r = row_of(id);
      exposed_moved |= r.btv != r.trust;
      out.min_exposed_gap = std::min(out.min_exposed_gap, relative_gap(r));
    }
    out.ordering_vacuous = !(resilient_moved && exposed_moved);
    out.ordering_ok = out.ordering_vacuous || out.max_resilient_gap < out.min_exposed_gap;
    summary.cells.push_back(out);
  }
  return summary;
}

std::string cell_stem(double k, double alpha) {
  return "sweep_k" + format_double(k) + "_a" + format_double(alpha);
}

std::vector<std::filesystem::path> emit_figure_data(const SweepResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create directory: " + ec.message());

  std::vector<std::filesystem::path> written;
  std::string manifest = "trustconnect-manifest v1\n";
  manifest += "graph_hash " + hex64(result.graph_hash) + "\n";
  manifest += "seed " + std::to_string(result.seed) + "\n";
  manifest += "cells " + std::to_string(result.cells.size()) + "\n";
  manifest += "# cell <k> <alpha> <csv> <svg> <network_trust>\n";

  for (const auto& cell : result.cells) {
    const auto stem = cell_stem(cell.k, cell.alpha);
    const auto csv_path = out_dir / (stem + ".csv");
    const auto svg_path = out_dir / (stem + ".svg");
    detail::write_file(csv_path, report_to_csv(cell.report));

    std::vector<std::string> labels;
    BarSeries btv{"Baseline Trust Value", "#4e79a7", {}};
    BarSeries trust{"Trust Value", "#f28e2b", {}};
    BarSeries eatv{"ECU Adjusted Trust Value", "#59a14f", {}};
    for (const auto& r : cell.report.rows) {
      labels.push_back(r.label);
      btv.values.push_back(r.btv);
      trust.values.push_back(r.trust);
      eatv.values.push_back(r.eatv);
    }
    const auto title = "k=" + format_double(cell.k) + ", a=" + format_double(cell.alpha);
    detail::write_file(svg_path, render_grouped_bars(title, labels, {btv, trust, eatv}));

    written.push_back(csv_path);
    written.push_back(svg_path);
    manifest += "cell " + format_double(cell.k) + " " + format_double(cell.alpha) + " " + stem + ".csv " + stem +
                ".svg " + format_double(cell.report.network_trust) + "\n";
  }
  const auto manifest_path = out_dir / "manifest.txt";
  detail::write_file(manifest_path, manifest);
  written.push_back(manifest_path);
  return written;
}

namespace {

std::string join_grid(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += " " + format_double(v);
  return out;
}

}  // namespace

std::string serialize_sweep_spec(const SweepSpec& spec) {
  std::string out = "trustconnect-sweep v1\n";
  if (std::holds_alternative<FixtureGraphSource>(spec.graph_source)) {
    out += "graph fixture\n";
  } else if (const auto* file = std::get_if<GraphFileSource>(&spec.graph_source)) {
    out += "graph file " + file->path.generic_string() + "\n";
  } else {
    const auto& g = std::get<GeneratedGraphSource>(spec.graph_source);
    out += "graph generate " + std::to_string(g.n) + " " + format_double(g.edge_probability) + " " +
           g.epsilon_distribution.to_string() + " " + std::to_string(g.seed) + "\n";
  }
  // Scenario records share the scenario document's vocabulary.
  const auto scenario = serialize_scenario(spec.scenario);
  out += scenario.substr(scenario.find('\n') + 1);
  out += "k" + join_grid(spec.k_values) + "\n";
  out += "alpha" + join_grid(spec.alpha_values) + "\n";
  out += "mode " + to_string(spec.base_params.mode) + "\n";
  out += "c0 " + format_double(spec.base_params.c0) + "\n";
  out += "max_iterations " + std::to_string(spec.base_params.max_iterations) + "\n";
  out += "tolerance " + format_double(spec.base_params.tolerance) + "\n";
  return out;
}

SweepSpec parse_sweep_spec(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  auto records = detail::tokenize_records(text);
  detail::expect_header(records, "trustconnect-sweep v1", source);
  SweepSpec spec;
  bool have_graph = false;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  auto real = [&](const detail::Record& r, std::size_t i) {
    try {
      return parse_double(r.fields[i]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, r.line, "field '" + r.fields[0] + "': " + e.what());
    }
  };
  auto grid = [&](const detail::Record& r) {
    if (r.fields.size() < 2) throw ParseError(source, r.line, "'" + r.fields[0] + "' needs at least one value");
    std::vector<double> values;
    for (std::size_t i = 1; i < r.fields.size(); ++i) values.push_back(real(r, i));
    return values;
  };

  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto& key = rec.fields[0];
    if (key == "graph") {
      if (have_graph) throw ParseError(source, rec.line, "duplicate 'graph' record");
      have_graph = true;
      if (rec.fields.size() == 2 && rec.fields[1] == "fixture") {
        spec.graph_source = FixtureGraphSource{};
      } else if (rec.fields.size() == 3 && rec.fields[1] == "file") {
        spec.graph_source = GraphFileSource{resolve(rec.fields[2])};
      } else if (rec.fields.size() == 6 && rec.fields[1] == "generate") {
        try {
          spec.graph_source = GeneratedGraphSource{static_cast<std::size_t>(parse_u64(rec.fields[2])),
                                                   parse_double(rec.fields[3]),
                                                   EpsilonDistribution::parse(rec.fields[4]),
                                                   parse_u64(rec.fields[5])};
        } catch (const std::invalid_argument& e) {
          throw ParseError(source, rec.line, std::string("graph generate: ") + e.what());
        }
      } else {
        throw ParseError(source, rec.line,
                         "expected: graph fixture | graph file <path> | graph generate <n> <p> <dist> <seed>");
      }
    } else if (key == "scenario") {
      if (rec.fields.size() == 2 && rec.fields[1] == "fixture") {
        spec.scenario = paper_fixture().scenario;
      } else if (rec.fields.size() == 2 && rec.fields[1] == "clean") {
        spec.scenario = ScenarioSpec{};
      } else if (rec.fields.size() == 3 && rec.fields[1] == "file") {
        spec.scenario = load_scenario(resolve(rec.fields[2]));
      } else {
        throw ParseError(source, rec.line, "expected: scenario fixture | scenario clean | scenario file <path>");
      }
    } else if (key == "k") {
      spec.k_values = grid(rec);
    } else if (key == "alpha") {
      spec.alpha_values = grid(rec);
    } else if (key == "mode") {
      if (rec.fields.size() != 2) throw ParseError(source, rec.line, "expected: mode <single-pass|fixed-point>");
      try {
        spec.base_params.mode = parse_trust_mode(rec.fields[1]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, rec.line, e.what());
      }
    } else if (key == "c0" && rec.fields.size() == 2) {
      spec.base_params.c0 = real(rec, 1);
    } else if (key == "tolerance" && rec.fields.size() == 2) {
      spec.base_params.tolerance = real(rec, 1);
    } else if (key == "max_iterations" && rec.fields.size() == 2) {
      try {
        spec.base_params.max_iterations = static_cast<int>(std::min<std::uint64_t>(parse_u64(rec.fields[1]), 1u << 30));
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, rec.line, e.what());
      }
    } else if (!detail::apply_scenario_record(spec.scenario, rec, source)) {
      throw ParseError(source, rec.line, "unknown record '" + key + "'");
    }
  }
  if (!have_graph) throw ParseError(source, records.back().line, "missing 'graph' key");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError({e.what()});
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  return parse_sweep_spec(detail::read_file(path), path.string(), path.parent_path());
}

}  // namespace trustconnect
