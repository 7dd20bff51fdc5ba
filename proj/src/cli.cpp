#include "trustconnect/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>

#include "trustconnect/detector.hpp"
#include "trustconnect/errors.hpp"
#include "trustconnect/experiment.hpp"
#include "trustconnect/report_io.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string format = "text";
};

/// Graph and snapshot selection shared by eval and detect.
struct InputOptions {
  std::string graph_path;
  bool fixture = false;
  std::string snapshot_path;
  std::string scenario_path;
  bool clean = false;
  std::vector<NodeId> attack_nodes;
  std::optional<std::string> attack_mode;
  std::optional<double> delta;
  std::optional<double> noise_sigma;
  std::string save_snapshot;
};

struct TrustOptions {
  double k = 1.0;
  double alpha = 0.1;
  double c0 = 1.0;
  std::string mode = "single-pass";
  int max_iterations = 100;
  double tolerance = 1e-9;

  TrustParams params() const {
    TrustParams p;
    p.k = k;
    p.alpha = alpha;
    p.c0 = c0;
    p.mode = parse_trust_mode(mode);
    p.max_iterations = max_iterations;
    p.tolerance = tolerance;
    return p;
  }
};

const std::set<std::string> kFormats = {"csv", "json", "text"};

fs::path in_output_dir(const GlobalOptions& g, const std::string& name) {
  fs::path p(name);
  if (!g.output_dir.empty() && p.is_relative()) return fs::path(g.output_dir) / p;
  return p;
}

void ensure_parent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
}

/// --seed wins over TRUSTCONNECT_SEED; neither present means "keep the default".
std::optional<std::uint64_t> effective_seed(const GlobalOptions& g) {
  if (g.seed) return g.seed;
  if (const char* env = std::getenv("TRUSTCONNECT_SEED"); env && *env) {
    try {
      return parse_u64(env);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(std::string("TRUSTCONNECT_SEED is not a non-negative integer: '") + env + "'");
    }
  }
  return std::nullopt;
}

void add_input_options(CLI::App& cmd, InputOptions& in) {
  auto* graph = cmd.add_option("--graph", in.graph_path, "Graph file (trustconnect-graph v1)");
  auto* fixture = cmd.add_flag("--fixture", in.fixture, "Use the committed 20-node paper fixture as the graph");
  graph->excludes(fixture);
  fixture->excludes(graph);

  auto* snapshot = cmd.add_option("--snapshot", in.snapshot_path, "Snapshot file (trustconnect-snapshot v1)");
  auto* scenario = cmd.add_option("--scenario", in.scenario_path, "Scenario file used to synthesize the snapshot");
  auto* clean = cmd.add_flag("--clean", in.clean, "Synthesize the no-attack, zero-noise snapshot");
  auto* nodes = cmd.add_option("--attack-nodes", in.attack_nodes, "Compromised node ids (comma separated)")
                    ->delimiter(',');
  auto* mode = cmd.add_option("--attack-mode", in.attack_mode,
                              "self-injection | inference-corruption | both (default self-injection)");
  auto* delta = cmd.add_option("--delta", in.delta, "Injection magnitude added to corrupted values");
  auto* noise = cmd.add_option("--noise-sigma", in.noise_sigma, "Std. deviation of honest inference noise");
  cmd.add_option("--save-snapshot", in.save_snapshot, "Also write the synthesized snapshot to this path");

  snapshot->excludes(scenario)->excludes(clean)->excludes(nodes)->excludes(mode)->excludes(delta)->excludes(noise);
  scenario->excludes(clean);
}

void add_trust_options(CLI::App& cmd, TrustOptions& t, bool full) {
  cmd.add_option("--k", t.k, "Deviation decay factor k (>= 0)")->capture_default_str();
  if (!full) return;
  cmd.add_option("--alpha", t.alpha, "Resilience amplification alpha (>= 0)")->capture_default_str();
  cmd.add_option("--c0", t.c0, "Prior trust for not-yet-scored neighbors")->capture_default_str();
  cmd.add_option("--mode", t.mode, "Trust evaluation: single-pass | fixed-point")
      ->check(CLI::IsMember({"single-pass", "fixed-point"}))
      ->capture_default_str();
  cmd.add_option("--max-iterations", t.max_iterations, "Fixed-point iteration cap")->capture_default_str();
  cmd.add_option("--tolerance", t.tolerance, "Fixed-point max-norm tolerance")->capture_default_str();
}

struct ResolvedInputs {
  DependencyGraph graph;
  Snapshot snapshot;
  std::uint64_t seed = 0;
};

ResolvedInputs resolve_inputs(const InputOptions& in, const GlobalOptions& g, std::ostream& err) {
  if (in.graph_path.empty() && !in.fixture) throw std::invalid_argument("one of --graph or --fixture is required");

  ResolvedInputs r;
  std::optional<ScenarioSpec> base;
  std::string base_name;
  if (in.fixture) {
    auto fixture = paper_fixture();
    r.graph = std::move(fixture.graph);
    base = std::move(fixture.scenario);
    base_name = "the fixture scenario";
  } else {
    r.graph = load_graph(in.graph_path);
  }

  if (!in.snapshot_path.empty()) {
    r.snapshot = load_snapshot(in.snapshot_path);
    auto problems = check_completeness(r.graph, r.snapshot);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    r.seed = effective_seed(g).value_or(0);
    return r;
  }

  if (in.clean) {
    base = ScenarioSpec{};
    base_name.clear();
  } else if (!in.scenario_path.empty()) {
    base = load_scenario(in.scenario_path);
    base_name = "scenario file " + in.scenario_path;
  }
  ScenarioSpec scenario = base.value_or(ScenarioSpec{});

  auto overriding = [&](const char* what) {
    if (!base_name.empty()) err << "warning: " << what << " overrides " << base_name << "\n";
  };
  if (auto seed = effective_seed(g)) {
    if (*seed != scenario.seed) overriding("--seed");
    scenario.seed = *seed;
  }
  if (in.noise_sigma) {
    overriding("--noise-sigma");
    scenario.noise_sigma = *in.noise_sigma;
  }
  if (!in.attack_nodes.empty() || in.attack_mode || in.delta) {
    overriding("inline attack flags");
    AttackSpec attack = scenario.attack.value_or(AttackSpec{{}, AttackMode::self_injection, 1.0});
    if (!in.attack_nodes.empty()) attack.compromised = {in.attack_nodes.begin(), in.attack_nodes.end()};
    if (in.attack_mode) attack.mode = parse_attack_mode(*in.attack_mode);
    if (in.delta) attack.delta = *in.delta;
    scenario.attack = std::move(attack);
  }
  r.snapshot = synthesize_snapshot(r.graph, scenario);
  r.seed = scenario.seed;
  if (!in.save_snapshot.empty()) {
    const auto path = in_output_dir(g, in.save_snapshot);
    ensure_parent(path);
    save_snapshot(r.snapshot, path);
  }
  return r;
}

void emit(const std::string& text, const std::string& out_path, const GlobalOptions& g, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  const auto path = in_output_dir(g, out_path);
  ensure_parent(path);
  detail::write_file(path, text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trustconnect: topology-based trust scoring for in-vehicle ECU networks", "trustconnect"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed (falls back to $TRUSTCONNECT_SEED)");
  app.add_option("--output-dir", global.output_dir, "Directory for produced files");
  app.add_option("--format", global.format, "Report format: csv | json | text")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a seeded random dependency graph");
  std::size_t gen_n = 20;
  double gen_p = 0.15;
  std::string gen_dist = "uniform";
  std::string gen_out = "graph.tcg";
  generate->add_option("--n", gen_n, "Number of ECUs (>= 1)")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--p", gen_p, "Independent edge probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  generate->add_option("--epsilon-dist", gen_dist, "uniform | uniform:LO,HI | constant:V")->capture_default_str();
  generate->add_option("--out", gen_out, "Output graph file ('-' for stdout)")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "Score every ECU: baseline, trust and adjusted trust");
  InputOptions eval_in;
  TrustOptions eval_trust;
  std::string eval_out;
  add_input_options(*eval, eval_in);
  add_trust_options(*eval, eval_trust, true);
  eval->add_option("--out", eval_out, "Write the report here instead of stdout");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a (k, alpha) grid and write per-cell CSV/SVG files");
  std::string sweep_spec_path;
  sweep->add_option("--spec", sweep_spec_path, "Sweep spec file (default: the fixture's 4x4 grid)");

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Flag ECUs contradicted by resilient neighbors");
  InputOptions det_in;
  TrustOptions det_trust;
  DetectorParams det_params;
  bool fail_on_flag = false;
  std::string det_out;
  add_input_options(*detect_cmd, det_in);
  add_trust_options(*detect_cmd, det_trust, false);
  detect_cmd->add_option("--weight-threshold", det_params.weight_threshold, "Contradiction when weight < this, in (0,1)")
      ->capture_default_str();
  detect_cmd->add_option("--evidence-threshold", det_params.evidence_threshold, "Flag at evidence >= this")
      ->capture_default_str();
  detect_cmd->add_flag("--fail-on-flag", fail_on_flag, "Exit 3 when any node is flagged");
  detect_cmd->add_option("--out", det_out, "Write the report here instead of stdout");

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Write the committed paper fixture graph, scenario and sweep spec");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("trustconnect");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*generate) {
      const auto dist = EpsilonDistribution::parse(gen_dist);
      const auto graph = generate_random(gen_n, gen_p, dist, effective_seed(global).value_or(0));
      if (gen_out == "-") {
        out << serialize_graph(graph);
        err << graph.node_count() << " nodes, " << graph.edge_count() << " edges\n";
      } else {
        const auto path = in_output_dir(global, gen_out);
        ensure_parent(path);
        save_graph(graph, path);
        out << "wrote " << path.generic_string() << ": " << graph.node_count() << " nodes, " << graph.edge_count()
            << " edges\n";
      }
      return kOk;
    }

    if (*eval) {
      const auto params = eval_trust.params();
      params.validate();
      const auto inputs = resolve_inputs(eval_in, global, err);
      const auto report = full_report(inputs.graph, inputs.snapshot, params, inputs.seed);
      if (!report.converged || !report.baseline_converged) {
        err << "warning: fixed-point iteration did not converge after " << report.iterations
            << " iterations; reporting the last iterate\n";
      }
      std::string text = global.format == "csv"    ? report_to_csv(report)
                         : global.format == "json" ? report_to_json(report)
                                                   : report_to_text(report);
      emit(text, eval_out, global, out);
      return kOk;
    }

    if (*detect_cmd) {
      det_params.validate();
      const auto params = det_trust.params();
      params.validate();
      const auto inputs = resolve_inputs(det_in, global, err);
      const auto report = detect(inputs.graph, inputs.snapshot, params, det_params);
      std::string text = global.format == "csv"    ? detection_to_csv(report)
                         : global.format == "json" ? detection_to_json(report)
                                                   : detection_to_text(report);
      emit(text, det_out, global, out);
      if (fail_on_flag && !report.flagged().empty()) return kFlagged;
      return kOk;
    }

    if (*sweep) {
      SweepSpec spec = sweep_spec_path.empty() ? default_fixture_sweep() : load_sweep_spec(sweep_spec_path);
      if (auto seed = effective_seed(global)) {
        if (*seed != spec.scenario.seed) err << "warning: --seed overrides the sweep scenario seed\n";
        spec.scenario.seed = *seed;
      }
      const auto result = run_sweep(spec);
      const fs::path dir = global.output_dir.empty() ? fs::path("sweep_out") : fs::path(global.output_dir);
      const auto written = emit_figure_data(result, dir);
      out << "sweep: " << result.cells.size() << " cells, graph " << hex64(result.graph_hash) << ", wrote "
          << written.size() << " files to " << dir.generic_string() << "\n";
      for (const auto& cell : result.cells) {
        out << "cell k=" << format_double(cell.k) << " a=" << format_double(cell.alpha)
            << " network_trust=" << format_double(cell.report.network_trust)
            << (cell.report.converged ? "" : " (not converged)") << "\n";
      }
      if (result.graph_hash == paper_fixture_graph_hash() && spec.scenario.attack) {
        const auto summary = narrative_check(result);
        out << "narrative check: " << (summary.passed() ? "pass" : "FAIL") << "\n";
      }
      return kOk;
    }

    if (*fixture) {
      const auto fx = paper_fixture();
      const fs::path dir = global.output_dir.empty() ? fs::path(".") : fs::path(global.output_dir);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
      save_graph(fx.graph, dir / "paper_fixture.tcg");
      save_scenario(fx.scenario, dir / "paper_fixture.scenario");
      auto spec = default_fixture_sweep();
      spec.graph_source = GraphFileSource{"paper_fixture.tcg"};
      detail::write_file(dir / "paper_fixture.sweep", serialize_sweep_spec(spec));
      out << "wrote paper_fixture.tcg, paper_fixture.scenario, paper_fixture.sweep to " << dir.generic_string()
          << " (graph " << hex64(graph_hash(fx.graph)) << ")\n";
      return kOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  }
  return kUsage;
}

}  // namespace trustconnect::cli
