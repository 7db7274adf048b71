// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Run from the repository root (ctest sets the working directory) so
// the bundled scenarios resolve.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navcon/errors.hpp"
#include "navcon/graph.hpp"
#include "navcon/potential.hpp"
#include "navcon/scenario.hpp"
#include "navcon/sim.hpp"
#include "navcon/trace_io.hpp"

using namespace navcon;

namespace {

ScenarioSpec load(const std::string& path) {
  std::ifstream f(path);
  REQUIRE_MESSAGE(f.good(), "missing scenario file: ", path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

void report(const char* id, bool ok, const char* what) {
  std::printf("[%s] %s: %s\n", id, ok ? "PASS" : "FAIL", what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("A1 formation convergence on the hexagon scenario") {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioSpec spec = load("scenarios/formation_hexagon.json");
  REQUIRE(spec.params.alpha == 1.5);
  REQUIRE(spec.params.delta1 == 0.4);
  REQUIRE(spec.params.delta2 == 0.4);
  REQUIRE(spec.params.comm_radius == 2.0);
  REQUIRE(spec.params.workspace_radius == 10.0);
  REQUIRE(spec.dt == 0.1);
  REQUIRE(spec.obstacles.size() == 3);
  REQUIRE(spec.agent_count() == 6);

  const SimTrace trace = run(spec);
  const MetricsSummary m = metrics(trace);
  const double elapsed = seconds_since(t0);

  const bool converged_in_time = trace.converged && trace.end_time <= 50.0;
  const bool distance_errors_ok = m.terminal_max_distance_error < 1e-2;
  bool fiedler_positive = true;
  for (double lam : m.fiedler_series) fiedler_positive = fiedler_positive && lam > 0.0;
  const bool clearance_ok = m.min_obstacle_clearance > 0.0;
  const bool not_failed = !trace.failed;
  const bool fast_enough = elapsed < 5.0;

  std::printf("     converged at t = %.1f s; max |d_ij - |c_ij|| = %.3g m; "
              "min fiedler = %.3g; min clearance = %.3g m; runtime = %.2f s\n",
              trace.end_time, m.terminal_max_distance_error, m.min_fiedler,
              m.min_obstacle_clearance, elapsed);
  report("A1", converged_in_time && distance_errors_ok && fiedler_positive &&
                   clearance_ok && not_failed && fast_enough,
         "6-node hexagon formation: errors < 1e-2 m within 50 s, fiedler > 0, "
         "clearance > 0");
  CHECK(converged_in_time);
  CHECK(distance_errors_ok);
  CHECK(fiedler_positive);
  CHECK(clearance_ok);
  CHECK(not_failed);
  CHECK(fast_enough);
}

TEST_CASE("A2 rendezvous convergence for six unicycles") {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioSpec spec = load("scenarios/rendezvous_six.json");
  REQUIRE(spec.params.alpha == 1.2);
  REQUIRE(spec.params.comm_radius == 2.0);
  REQUIRE(spec.params.delta1 == 0.4);
  REQUIRE(spec.params.delta2 == 0.4);
  REQUIRE(spec.destination == Vec2{0, 0});
  REQUIRE(spec.goal_heading == 0.0);
  REQUIRE(spec.agent_count() == 6);

  const SimTrace trace = run(spec);
  const MetricsSummary m = metrics(trace);
  const double elapsed = seconds_since(t0);

  const bool converged_in_time = trace.converged && trace.end_time <= 100.0;
  const bool position_ok = m.terminal_max_position_error < 0.05;
  const bool heading_ok = m.terminal_max_heading_error < 0.1;
  const bool links_ok = m.max_link_length < 2.0;  // the Fig. 8 property
  const bool not_failed = !trace.failed;
  const bool fast_enough = elapsed < 5.0;

  std::printf("     converged at t = %.1f s; max position error = %.3g m; "
              "max heading error = %.3g rad; max link length = %.4f m; runtime = %.2f s\n",
              trace.end_time, m.terminal_max_position_error,
              m.terminal_max_heading_error, m.max_link_length, elapsed);
  report("A2", converged_in_time && position_ok && heading_ok && links_ok &&
                   not_failed && fast_enough,
         "6 unicycles reach p* within 0.05 m and 0.1 rad by 100 s; links < 2 m "
         "throughout");
  CHECK(converged_in_time);
  CHECK(position_ok);
  CHECK(heading_ok);
  CHECK(links_ok);
  CHECK(not_failed);
  CHECK(fast_enough);
}

TEST_CASE("A3 analytic gradients match the finite-difference oracle") {
  const auto t0 = std::chrono::steady_clock::now();
  const GradCheckReport rep = gradient_check(2026, 1000);
  const double elapsed = seconds_since(t0);

  const bool tol_ok = rep.worst_rel_error < 1e-6;
  const bool fast_enough = elapsed < 10.0;
  std::printf("     worst relative error %.3g over %d configs per variant; "
              "runtime = %.2f s\n",
              rep.worst_rel_error, rep.trials_per_variant, elapsed);
  report("A3", tol_ok && fast_enough,
         "1000 random configurations per field variant agree within 1e-6");
  CHECK(tol_ok);
  CHECK(fast_enough);
}

TEST_CASE("A4 spectral unit values") {
  bool complete_ok = true;
  for (int n = 2; n <= 8; ++n) {
    ProximityGraph g;
    g.node_count = n;
    g.radius = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    complete_ok = complete_ok && std::abs(fiedler_value(g).fiedler - n) < 1e-8;
  }

  ProximityGraph p3;
  p3.node_count = 3;
  p3.radius = 1.0;
  p3.edges = {{0, 1}, {1, 2}};
  const bool path_ok = std::abs(fiedler_value(p3).fiedler - 1.0) < 1e-8;

  ProximityGraph split;  // two disjoint dumbbells
  split.node_count = 6;
  split.radius = 1.0;
  split.edges = {{0, 1}, {1, 2}, {3, 4}, {4, 5}};
  ProximityGraph isolated;
  isolated.node_count = 2;
  isolated.radius = 1.0;
  const bool disconnected_ok = fiedler_value(split).fiedler < 1e-10 &&
                               fiedler_value(isolated).fiedler < 1e-10;

  report("A4", complete_ok && path_ok && disconnected_ok,
         "lambda2(K_n) = n (n = 2..8), lambda2(P3) = 1, lambda2 < 1e-10 when "
         "disconnected");
  CHECK(complete_ok);
  CHECK(path_ok);
  CHECK(disconnected_ok);
}

TEST_CASE("A5 dipolar field axioms on a 101x101 grid") {
  ScenarioSpec spec;
  spec.mode = SimMode::rendezvous;
  spec.params.alpha = 1.2;
  spec.params.workspace_radius = 5.0;
  spec.destination = {0, 0};
  spec.goal_heading = 0.0;
  spec.agents = {{{1.0, 1.0}, 0}};

  const int n = 101;
  const double R = spec.params.workspace_radius;
  const std::string grid =
      export_field_grid(make_grid_evaluator(spec), {-R, R, -R, R}, n);

  std::istringstream lines(grid);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> xs, ys, vs;
  while (std::getline(lines, line)) {
    double x, y, v;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) == 3);
    xs.push_back(x);
    ys.push_back(y);
    vs.push_back(v);
  }
  REQUIRE(vs.size() == static_cast<std::size_t>(n) * n);

  bool range_ok = true, polar_ok = true, boundary_ok = true, symmetry_ok = true;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    range_ok = range_ok && vs[k] >= 0.0 && vs[k] <= 1.0;
    const bool at_destination = xs[k] == 0.0 && ys[k] == 0.0;
    polar_ok = polar_ok && ((vs[k] == 0.0) == at_destination);
    if (std::sqrt(xs[k] * xs[k] + ys[k] * ys[k]) >= R - 1e-12)
      boundary_ok = boundary_ok && std::abs(vs[k] - 1.0) <= 1e-12;
    const std::size_t iy = k / n, ix = k % n;
    const std::size_t mirrored = (n - 1 - iy) * n + ix;
    symmetry_ok = symmetry_ok && std::abs(vs[k] - vs[mirrored]) <= 1e-12;
  }

  report("A5", range_ok && polar_ok && boundary_ok && symmetry_ok,
         "values in [0,1]; 0 only at p*; 1 on the rim; mirror symmetry <= 1e-12");
  CHECK(range_ok);
  CHECK(polar_ok);
  CHECK(boundary_ok);
  CHECK(symmetry_ok);
}

TEST_CASE("A6 piecewise factor checks") {
  FieldParams p;
  p.comm_radius = 2.0;
  p.delta1 = 0.4;
  p.delta2 = 0.4;
  p.workspace_radius = 5.0;

  const Curve inner = edge_tension(p.comm_radius - p.delta2, p);
  const Curve inner_above = edge_tension(p.comm_radius - p.delta2 + 1e-9, p);
  const bool tension_inner_ok = inner.value == 1.0 && inner.deriv == 0.0 &&
                                std::abs(inner_above.deriv) < 2e-8;
  const bool tension_outer_ok = edge_tension(p.comm_radius, p).value == 0.0;

  const Curve cb = collision_factor(p.delta1, p);
  const Curve cb_below = collision_factor(p.delta1 - 1e-9, p);
  const bool collision_ok =
      cb.value == 1.0 && cb.deriv == 0.0 && std::abs(cb_below.deriv) < 2e-8;

  const bool worked_ok =
      std::abs(edge_tension(1.8, p).value - 0.75) <= 1e-14 &&
      std::abs(collision_factor(0.2, p).value - 0.75) <= 1e-14 &&
      std::abs(boundary_factor({4.8, 0}, p).value - 0.75) <= 1e-14;

  report("A6", tension_inner_ok && tension_outer_ok && collision_ok && worked_ok,
         "breakpoint values/derivatives and the 0.75 half-buffer values");
  CHECK(tension_inner_ok);
  CHECK(tension_outer_ok);
  CHECK(collision_ok);
  CHECK(worked_ok);
}

TEST_CASE("A7 repeated runs produce byte-identical traces") {
  const ScenarioSpec hexagon = load("scenarios/formation_hexagon.json");
  const std::string ha = write_trace(run(hexagon));
  const std::string hb = write_trace(run(hexagon));

  const ScenarioSpec six = load("scenarios/rendezvous_six.json");
  const std::string ra = write_trace(run(six));
  const std::string rb = write_trace(run(six));

  const bool ok = (ha == hb) && (ra == rb);
  report("A7", ok, "A1 and A2 reruns emit byte-identical trace files");
  CHECK(ha == hb);
  CHECK(ra == rb);
}
