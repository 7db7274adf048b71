// navcon: scenario-driven multi-agent navigation simulator.
//
// Subcommands:
//   simulate   run a scenario, write trace/metrics/SVG artifacts
//   field      sample a scenario's potential field on a grid
//   gradcheck  compare analytic gradients against finite differences
//   fiedler    report the initial graph's algebraic connectivity

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "navcon/errors.hpp"
#include "navcon/graph.hpp"
#include "navcon/kernels.hpp"
#include "navcon/scenario.hpp"
#include "navcon/sim.hpp"
#include "navcon/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitFailure = 3;

navcon::ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw navcon::InvalidInput("cannot read scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return navcon::parse_scenario(ss.str());
}

struct Overrides {
  std::optional<double> dt, duration;
  std::optional<std::uint64_t> seed;

  void apply(navcon::ScenarioSpec& spec) const {
    if (dt) spec.dt = *dt;
    if (duration) spec.duration = *duration;
    if (seed) spec.seed = *seed;
    spec.validate();
  }
};

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 const Overrides& overrides) {
  navcon::ScenarioSpec spec = load_scenario(scenario_path);
  overrides.apply(spec);

  const navcon::SimTrace trace = navcon::run(spec);
  const navcon::MetricsSummary summary = navcon::metrics(trace);

  std::filesystem::create_directories(out_dir);
  const auto out = [&](const std::string& name) { return out_dir + "/" + name; };
  navcon::write_file_atomic(out("trace.csv"), navcon::write_trace(trace));
  navcon::write_file_atomic(out("metrics.txt"),
                            navcon::format_metrics(summary, spec.mode));
  navcon::write_file_atomic(out("trajectory.svg"), navcon::render_svg(trace));
  // The resolved spec (deployment, headings, overrides) for reproduction.
  navcon::write_file_atomic(out("scenario_effective.json"),
                            navcon::serialize_scenario(trace.spec));

  std::printf("agents: %zu  steps: %zu  end_time: %.10g s\n",
              trace.records.front().agents.size(), trace.records.size() - 1,
              trace.end_time);
  std::printf("min_fiedler: %.10g\n", summary.min_fiedler);
  if (spec.mode == navcon::SimMode::formation) {
    std::printf("terminal_max_distance_error: %.10g m\n",
                summary.terminal_max_distance_error);
    std::printf("terminal_max_offset_error: %.10g m\n", summary.terminal_max_offset_error);
  } else {
    std::printf("terminal_max_position_error: %.10g m\n",
                summary.terminal_max_position_error);
    std::printf("terminal_max_heading_error: %.10g rad\n",
                summary.terminal_max_heading_error);
  }

  if (trace.failed) {
    std::printf("status: failed\n");
    return kExitFailure;
  }
  if (trace.converged) {
    std::printf("status: converged\n");
    return kExitOk;
  }
  if (spec.duration == 0.0) {
    std::printf("status: success (zero-duration run)\n");
    return kExitOk;
  }
  std::printf("status: converged-false (horizon reached)\n");
  return kExitFailure;
}

int cmd_field(const std::string& scenario_path, int grid, const std::string& out_path) {
  if (grid < 2) throw navcon::InvalidInput("--grid must be >= 2");
  navcon::ScenarioSpec spec = load_scenario(scenario_path);
  if (spec.random_agents > 0) {
    spec.agents = navcon::deploy_connected(spec.random_agents, spec.params, spec.seed,
                                           spec.mode, spec.informed);
    spec.random_agents = 0;
  }
  const double R = spec.params.workspace_radius;
  const navcon::GridBounds bounds{-R, R, -R, R};
  const std::string grid_text =
      navcon::export_field_grid(navcon::make_grid_evaluator(spec), bounds, grid);
  navcon::write_file_atomic(out_path, grid_text);
  std::printf("wrote %dx%d field grid to %s (backend: %s)\n", grid, grid,
              out_path.c_str(), navcon::kernels::backend_name());
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed, int trials) {
  if (trials < 1) throw navcon::InvalidInput("--trials must be >= 1");
  const navcon::GradCheckReport report = navcon::gradient_check(seed, trials);
  const char* variant_names[] = {"informed", "follower", "formation"};
  std::printf("trials: %d per variant\n", report.trials_per_variant);
  std::printf("worst_rel_error: %.6g\n", report.worst_rel_error);
  if (report.worst_variant >= 0)
    std::printf("worst case: %s field at (%.6g, %.6g)\n",
                variant_names[report.worst_variant], report.worst_position.x,
                report.worst_position.y);
  if (!report.passed()) {
    std::printf("status: FAIL (tolerance 1e-6)\n");
    return kExitFailure;
  }
  std::printf("status: pass\n");
  return kExitOk;
}

int cmd_fiedler(const std::string& scenario_path) {
  navcon::ScenarioSpec spec = load_scenario(scenario_path);
  if (spec.random_agents > 0) {
    spec.agents = navcon::deploy_connected(spec.random_agents, spec.params, spec.seed,
                                           spec.mode, spec.informed);
    spec.random_agents = 0;
  }
  std::vector<navcon::Vec2> pos;
  for (const auto& a : spec.agents) pos.push_back(a.position);

  if (pos.size() < 2) {
    std::printf("single agent: trivially connected\n");
    return kExitOk;
  }
  const auto undirected =
      navcon::build_proximity_graph(pos, spec.params.comm_radius, false);
  const navcon::SpectralReport rep = navcon::fiedler_value(undirected);
  std::printf("fiedler: %.10g\n", rep.fiedler);
  std::printf("connected: %s\n", rep.connected ? "yes" : "no");
  if (spec.mode == navcon::SimMode::rendezvous) {
    const auto directed =
        navcon::build_proximity_graph(pos, spec.params.comm_radius, true);
    const bool tree = navcon::has_directed_spanning_tree(directed, spec.informed);
    std::printf("directed spanning tree from informed agent %d: %s\n", spec.informed,
                tree ? "yes" : "no");
    if (!tree) std::printf("note: the rendezvous root-reachability assumption fails\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-agent navigation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::string grid_out = "field.csv";
  Overrides overrides;
  int grid = 101;
  std::uint64_t seed = 1;
  int trials = 1000;

  CLI::App* sim = app.add_subcommand("simulate", "Run a scenario and write artifacts");
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--out", out_dir, "Output directory (default: out)");
  double dt_val = 0.0, duration_val = 0.0;
  std::uint64_t seed_val = 0;
  sim->add_option("--dt", dt_val, "Override time step [s]")
      ->each([&](const std::string&) { overrides.dt = dt_val; });
  sim->add_option("--duration", duration_val, "Override horizon [s]")
      ->each([&](const std::string&) { overrides.duration = duration_val; });
  sim->add_option("--seed", seed_val, "Override deployment seed")
      ->each([&](const std::string&) { overrides.seed = seed_val; });

  CLI::App* field = app.add_subcommand("field", "Export the potential field grid");
  field->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  field->add_option("--grid", grid, "Samples per axis (default: 101)");
  field->add_option("--out", grid_out, "Output CSV path (default: field.csv)");

  CLI::App* gc = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
  gc->add_option("--seed", seed, "RNG seed (default: 1)");
  gc->add_option("--trials", trials, "Trials per field variant (default: 1000)");

  CLI::App* fv = app.add_subcommand("fiedler", "Initial-graph connectivity report");
  fv->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(scenario_path, out_dir, overrides);
    if (field->parsed()) return cmd_field(scenario_path, grid, grid_out);
    if (gc->parsed()) return cmd_gradcheck(seed, trials);
    if (fv->parsed()) return cmd_fiedler(scenario_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  } catch (const navcon::InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}
