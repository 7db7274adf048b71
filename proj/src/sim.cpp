#include "navcon/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "navcon/errors.hpp"
#include "navcon/graph.hpp"

namespace navcon {

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::collision: return "collision";
    case EventKind::link_break: return "link_break";
    case EventKind::boundary_violation: return "boundary";
    case EventKind::stall: return "stall";
    case EventKind::converged: return "converged";
  }
  return "?";
}

AgentState euler_step_holonomic(const AgentState& state, Vec2 velocity, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("euler_step_holonomic: dt must be > 0");
  AgentState next = state;
  next.position += velocity * dt;
  return next;
}

AgentState euler_step_unicycle(const AgentState& state, double v, double omega,
                               double dt) {
  if (!(dt > 0.0)) throw InvalidInput("euler_step_unicycle: dt must be > 0");
  AgentState next = state;
  next.position.x += v * std::cos(state.heading) * dt;
  next.position.y += v * std::sin(state.heading) * dt;
  next.heading = wrap_angle(state.heading + omega * dt);
  return next;
}

void update_links(WorldState& world, const ScenarioSpec& spec, int step,
                  std::vector<Event>& events) {
  if (spec.mode == SimMode::formation) {
    // The maintained set is exactly the static formation pairs; nothing to add.
  } else {
    const double form_below = spec.params.comm_radius - spec.params.delta2;
    std::set<LinkPair> links(world.maintained_links.begin(),
                             world.maintained_links.end());
    const int n = static_cast<int>(world.agents.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (links.contains({i, j})) continue;
        if (distance(world.agents[i].position, world.agents[j].position) <= form_below)
          links.insert({i, j});
      }
    }
    world.maintained_links.assign(links.begin(), links.end());
  }

  for (const auto& [i, j] : world.maintained_links) {
    if (distance(world.agents[i].position, world.agents[j].position) >
        spec.params.comm_radius)
      events.push_back({EventKind::link_break, step, i, j});
  }
}

namespace {

struct AgentEval {
  FieldEval field;
  bool collision = false;
};

std::vector<std::vector<int>> link_peers_of(const WorldState& world) {
  std::vector<std::vector<int>> peers(world.agents.size());
  for (const auto& [i, j] : world.maintained_links) {
    peers[i].push_back(j);
    peers[j].push_back(i);
  }
  return peers;
}

bool outside_workspace(const AgentState& a, const ScenarioSpec& spec) {
  return a.position.norm() > spec.params.workspace_radius;
}

AgentEval evaluate_agent(const WorldState& world, const ScenarioSpec& spec, int i,
                         const std::vector<std::vector<int>>& peers) {
  const AgentState& self = world.agents[i];
  AgentEval out;

  if (spec.mode == SimMode::formation) {
    FormationContext ctx;
    ctx.self_position = self.position;
    for (int j : spec.formation_neighbors_of(i))
      ctx.formation_neighbors.push_back(
          {world.agents[j].position, spec.formation_offsets.at({i, j})});
    for (const AgentState& other : world.agents) {
      if (other.id == i) continue;
      if (distance(self.position, other.position) <= spec.params.comm_radius)
        ctx.proximity_neighbors.push_back(other.position);
    }
    for (const Vec2& o : world.obstacles)
      if (distance(self.position, o) <= spec.params.comm_radius)
        ctx.obstacles.push_back(o);

    if (outside_workspace(self, spec)) {
      // Diagnostic evaluation for an escaped agent: maximal potential, no push.
      const GoalEval goal = formation_goal(ctx);
      out.field = {1.0, Vec2{}, goal.gamma, 0.0};
      return out;
    }
    const FormationFieldEval r = nf_formation(ctx, spec.params);
    return {r.field, r.collision};
  }

  RendezvousContext ctx;
  ctx.self_position = self.position;
  ctx.destination = spec.destination;
  ctx.desired_heading = spec.goal_heading;
  ctx.role = self.role;
  if (self.role == AgentRole::informed) {
    if (outside_workspace(self, spec)) {
      out.field = {1.0, Vec2{}, (self.position - spec.destination).norm2(), 0.0};
      return out;
    }
    out.field = nf_informed(ctx, spec.params);
    return out;
  }
  for (int j : peers[i]) ctx.neighbors.push_back(world.agents[j].position);
  out.field = nf_follower(ctx, spec.params);
  return out;
}

std::vector<AgentEval> evaluate_all(const WorldState& world, const ScenarioSpec& spec) {
  const auto peers = link_peers_of(world);
  std::vector<AgentEval> evals(world.agents.size());
  for (std::size_t i = 0; i < world.agents.size(); ++i)
    evals[i] = evaluate_agent(world, spec, static_cast<int>(i), peers);
  return evals;
}

double fiedler_of(const WorldState& world, const ScenarioSpec& spec) {
  const int n = static_cast<int>(world.agents.size());
  if (n < 2) return 0.0;
  ProximityGraph g;
  if (spec.fiedler_edges == FiedlerEdges::proximity) {
    std::vector<Vec2> pos(world.agents.size());
    for (std::size_t i = 0; i < world.agents.size(); ++i) pos[i] = world.agents[i].position;
    g = build_proximity_graph(pos, spec.params.comm_radius, false);
  } else {
    g.node_count = n;
    g.radius = spec.params.comm_radius;
    g.edges = world.maintained_links;
  }
  return fiedler_value(g).fiedler;
}

bool agent_unconverged(const WorldState& world, const ScenarioSpec& spec, int i,
                       const AgentEval& eval) {
  if (spec.mode == SimMode::formation) return eval.field.gamma > kFormationGoalTol;
  return distance(world.agents[i].position, spec.destination) > kRendezvousPosTol;
}

bool all_converged(const WorldState& world, const ScenarioSpec& spec,
                   const std::vector<AgentEval>& evals) {
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    if (spec.mode == SimMode::formation) {
      if (!(evals[i].field.gamma < kFormationGoalTol)) return false;
    } else {
      if (!(distance(world.agents[i].position, spec.destination) < kRendezvousPosTol))
        return false;
      if (!(std::abs(heading_error(world.agents[i].heading, spec.goal_heading)) <
            kRendezvousAngTol))
        return false;
    }
  }
  return true;
}

StepRecord make_record(const WorldState& world, const ScenarioSpec& spec,
                       const std::vector<AgentEval>& evals, std::vector<Event> events) {
  StepRecord rec;
  rec.time = world.time;
  rec.links = world.maintained_links;
  rec.fiedler = fiedler_of(world, spec);
  rec.events = std::move(events);
  rec.agents.resize(world.agents.size());
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    rec.agents[i] = {world.agents[i].position, world.agents[i].heading,
                     evals[i].field.value,     evals[i].field.gradient,
                     evals[i].field.gamma,     evals[i].field.beta_term};
  }
  return rec;
}

}  // namespace

SimTrace run(const ScenarioSpec& spec) {
  spec.validate();
  ScenarioSpec eff = spec;
  if (eff.random_agents > 0) {
    eff.agents = deploy_connected(eff.random_agents, eff.params, eff.seed, eff.mode,
                                  eff.mode == SimMode::rendezvous ? eff.informed : 0);
    eff.random_agents = 0;
  }

  const int n = static_cast<int>(eff.agents.size());
  WorldState world;
  world.obstacles = eff.obstacles;
  world.agents.resize(n);
  for (int i = 0; i < n; ++i) {
    world.agents[i].id = i;
    world.agents[i].position = eff.agents[i].position;
    world.agents[i].heading = eff.agents[i].heading;
    world.agents[i].role = (eff.mode == SimMode::rendezvous && i == eff.informed)
                               ? AgentRole::informed
                               : AgentRole::follower;
  }

  std::vector<Vec2> pos0(n);
  for (int i = 0; i < n; ++i) pos0[i] = world.agents[i].position;

  // Initial topology preconditions; links are created here and then maintained.
  if (eff.mode == SimMode::formation) {
    for (const auto& [key, c] : eff.formation_offsets)
      if (key.first < key.second) world.maintained_links.push_back(key);
    if (n >= 2 && !bfs_connected(build_proximity_graph(pos0, eff.params.comm_radius, false)))
      throw InvalidInput("run: initial proximity graph is not connected");
    for (const auto& [i, j] : world.maintained_links)
      if (distance(pos0[i], pos0[j]) > eff.params.comm_radius)
        throw InvalidInput("run: formation pair (" + std::to_string(i) + "," +
                           std::to_string(j) + ") starts outside the comm radius");
  } else if (n >= 2) {
    const ProximityGraph g = build_proximity_graph(pos0, eff.params.comm_radius, true);
    if (!has_directed_spanning_tree(g, eff.informed))
      throw InvalidInput(
          "run: initial graph has no directed spanning tree rooted at the informed agent");
    for (const auto& [i, j] : g.edges)
      if (i < j) world.maintained_links.push_back({i, j});
  }
  std::sort(world.maintained_links.begin(), world.maintained_links.end());

  SimTrace trace;
  trace.spec = eff;

  const int steps = static_cast<int>(std::llround(eff.duration / eff.dt));
  std::vector<HeadingTracker> trackers(n);
  std::vector<double> stall_clock(n, 0.0);
  std::vector<char> stalled(n, 0), collided(n, 0), escaped(n, 0);
  std::set<LinkPair> reported_breaks;

  auto evals = evaluate_all(world, eff);

  // Record 0: the initial state (collisions there are possible and recorded).
  {
    std::vector<Event> events;
    for (int i = 0; i < n; ++i) {
      if (evals[i].collision && !collided[i]) {
        collided[i] = 1;
        trace.failed = true;
        events.push_back({EventKind::collision, 0, i, -1});
      }
    }
    if (all_converged(world, eff, evals)) {
      trace.converged = true;
      events.push_back({EventKind::converged, 0, -1, -1});
    }
    trace.records.push_back(make_record(world, eff, evals, std::move(events)));
  }

  for (int step = 1; step <= steps && !trace.converged; ++step) {
    // Synchronous advance: every control is computed from the pre-step
    // snapshot, then all states move together.
    const double t_prev = world.time;
    std::vector<AgentState> next(world.agents.size());
    for (int i = 0; i < n; ++i) {
      if (eff.mode == SimMode::formation) {
        const Vec2 u = gradient_control(evals[i].field, eff.gains);
        next[i] = euler_step_holonomic(world.agents[i], u, eff.dt);
      } else {
        const UnicycleCommand cmd = unicycle_control(
            evals[i].field, world.agents[i].heading, trackers[i], t_prev, eff.gains);
        next[i] = euler_step_unicycle(world.agents[i], cmd.v, cmd.omega, eff.dt);
      }
    }
    world.agents = std::move(next);
    world.time = step * eff.dt;

    std::vector<Event> events;
    for (int i = 0; i < n; ++i) {
      if (outside_workspace(world.agents[i], eff) && !escaped[i]) {
        escaped[i] = 1;
        trace.failed = true;
        events.push_back({EventKind::boundary_violation, step, i, -1});
      }
    }

    update_links(world, eff, step, events);
    // A broken pair is reported once; it stays broken forever after.
    std::erase_if(events, [&](const Event& e) {
      return e.kind == EventKind::link_break &&
             reported_breaks.contains({e.agent, e.other});
    });
    for (const Event& e : events) {
      if (e.kind == EventKind::link_break) {
        reported_breaks.insert({e.agent, e.other});
        trace.failed = true;
      }
    }

    evals = evaluate_all(world, eff);

    for (int i = 0; i < n; ++i) {
      if (evals[i].collision && !collided[i]) {
        collided[i] = 1;
        trace.failed = true;
        events.push_back({EventKind::collision, step, i, -1});
      }
      // Stall: persistent vanishing gradient while the goal is unmet.
      if (evals[i].field.gradient.norm() < kStallGradTol &&
          agent_unconverged(world, eff, i, evals[i])) {
        stall_clock[i] += eff.dt;
      } else {
        stall_clock[i] = 0.0;
      }
      if (stall_clock[i] >= kStallDwell - 1e-12 && !stalled[i]) {
        stalled[i] = 1;
        events.push_back({EventKind::stall, step, i, -1});
      }
    }

    if (all_converged(world, eff, evals)) {
      trace.converged = true;
      events.push_back({EventKind::converged, step, -1, -1});
    }
    trace.records.push_back(make_record(world, eff, evals, std::move(events)));
  }

  trace.end_time = trace.records.back().time;
  return trace;
}

MetricsSummary metrics(const SimTrace& trace) {
  if (trace.records.empty()) throw InvalidInput("metrics: empty trace");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  MetricsSummary m;
  m.converged = trace.converged;
  m.failed = trace.failed;
  m.end_time = trace.end_time;
  m.min_fiedler = kInf;
  m.min_obstacle_clearance = kInf;
  m.min_agent_separation = kInf;

  for (const StepRecord& rec : trace.records) {
    m.fiedler_series.push_back(rec.fiedler);
    m.min_fiedler = std::min(m.min_fiedler, rec.fiedler);

    double max_link = 0.0;
    for (const auto& [i, j] : rec.links)
      max_link = std::max(max_link,
                          distance(rec.agents[i].position, rec.agents[j].position));
    m.max_link_length_series.push_back(max_link);
    m.max_link_length = std::max(m.max_link_length, max_link);

    for (std::size_t i = 0; i < rec.agents.size(); ++i) {
      for (std::size_t j = i + 1; j < rec.agents.size(); ++j)
        m.min_agent_separation =
            std::min(m.min_agent_separation,
                     distance(rec.agents[i].position, rec.agents[j].position));
      for (const Vec2& o : trace.spec.obstacles)
        m.min_obstacle_clearance =
            std::min(m.min_obstacle_clearance, distance(rec.agents[i].position, o));
    }
  }

  const StepRecord& last = trace.records.back();
  if (trace.spec.mode == SimMode::formation) {
    for (const auto& [key, c] : trace.spec.formation_offsets) {
      if (key.first >= key.second) continue;
      const Vec2 diff =
          last.agents[key.first].position - last.agents[key.second].position;
      m.terminal_max_distance_error =
          std::max(m.terminal_max_distance_error, std::abs(diff.norm() - c.norm()));
      m.terminal_max_offset_error =
          std::max(m.terminal_max_offset_error, (diff - c).norm());
    }
  } else {
    for (const AgentRecord& a : last.agents) {
      m.terminal_max_position_error = std::max(
          m.terminal_max_position_error, distance(a.position, trace.spec.destination));
      m.terminal_max_heading_error =
          std::max(m.terminal_max_heading_error,
                   std::abs(heading_error(a.heading, trace.spec.goal_heading)));
    }
  }
  return m;
}

std::string format_metrics(const MetricsSummary& m, SimMode mode) {
  char buf[128];
  std::string out;
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s: %.10g\n", key, v);
    out += buf;
  };
  out += std::string("status: ") +
         (m.failed ? "failed" : (m.converged ? "converged" : "horizon")) + "\n";
  line("end_time", m.end_time);
  line("min_fiedler", m.min_fiedler);
  line("max_link_length", m.max_link_length);
  line("min_obstacle_clearance", m.min_obstacle_clearance);
  line("min_agent_separation", m.min_agent_separation);
  if (mode == SimMode::formation) {
    line("terminal_max_distance_error", m.terminal_max_distance_error);
    line("terminal_max_offset_error", m.terminal_max_offset_error);
  } else {
    line("terminal_max_position_error", m.terminal_max_position_error);
    line("terminal_max_heading_error", m.terminal_max_heading_error);
  }
  return out;
}

}  // namespace navcon
