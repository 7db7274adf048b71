#pragma once

#include <string>
#include <utility>
#include <vector>

#include "navcon/control.hpp"
#include "navcon/potential.hpp"
#include "navcon/scenario.hpp"
#include "navcon/vec2.hpp"

namespace navcon {

struct AgentState {
  int id = 0;
  Vec2 position{};
  double heading = 0.0;  // meaningful in rendezvous (unicycle) mode
  AgentRole role = AgentRole::follower;
};

using LinkPair = std::pair<int, int>;  // i < j

struct WorldState {
  double time = 0.0;
  std::vector<AgentState> agents;
  std::vector<LinkPair> maintained_links;
  std::vector<Vec2> obstacles;
};

enum class EventKind { collision, link_break, boundary_violation, stall, converged };
const char* event_name(EventKind kind);

struct Event {
  EventKind kind{};
  int step = 0;
  int agent = -1;  // -1 for world-level events
  int other = -1;  // second endpoint for link events
};

struct AgentRecord {
  Vec2 position{};
  double heading = 0.0;
  double phi = 0.0;
  Vec2 gradient{};
  double gamma = 0.0;
  double beta_term = 0.0;
};

struct StepRecord {
  double time = 0.0;
  std::vector<AgentRecord> agents;
  std::vector<LinkPair> links;
  double fiedler = 0.0;
  std::vector<Event> events;
};

/// Complete run record: the effective scenario (deployment resolved), one
/// record per step plus the initial one, and the outcome flags.
struct SimTrace {
  ScenarioSpec spec;
  std::vector<StepRecord> records;
  bool converged = false;
  bool failed = false;
  double end_time = 0.0;
};

// Convergence and stall thresholds.
inline constexpr double kFormationGoalTol = 1e-4;   // per-agent goal value
inline constexpr double kRendezvousPosTol = 0.05;   // m
inline constexpr double kRendezvousAngTol = 0.1;    // rad
inline constexpr double kStallGradTol = 1e-9;
inline constexpr double kStallDwell = 1.0;          // s of persistent stall

/// position += velocity * dt.
AgentState euler_step_holonomic(const AgentState& state, Vec2 velocity, double dt);

/// x += v cos(theta) dt, y += v sin(theta) dt, theta = wrap(theta + omega dt).
AgentState euler_step_unicycle(const AgentState& state, double v, double omega,
                               double dt);

/// Refreshes the maintained link set. Formation: links are the static
/// formation pairs. Rendezvous: existing links persist; a new link forms when
/// an unlinked pair comes within comm_radius - delta2 (hysteresis keeps new
/// links out of the escape ring). Any maintained link longer than comm_radius
/// appends a link_break event.
void update_links(WorldState& world, const ScenarioSpec& spec, int step,
                  std::vector<Event>& events);

/// Runs the scenario to its horizon or to convergence. Throws InvalidInput if
/// the initial topology violates the mode's precondition. Deterministic for a
/// given spec (including the seed).
SimTrace run(const ScenarioSpec& spec);

struct MetricsSummary {
  std::vector<double> fiedler_series;
  std::vector<double> max_link_length_series;
  double min_fiedler = 0.0;
  double max_link_length = 0.0;
  double min_obstacle_clearance = 0.0;  // +inf when no obstacles
  double min_agent_separation = 0.0;
  double terminal_max_distance_error = 0.0;  // formation: | ||q_i-q_j|| - ||c_ij|| |
  double terminal_max_offset_error = 0.0;    // formation: ||q_i - q_j - c_ij||
  double terminal_max_position_error = 0.0;  // rendezvous: ||p_i - p*||
  double terminal_max_heading_error = 0.0;   // rendezvous: |wrap(theta_i - theta*)|
  bool converged = false;
  bool failed = false;
  double end_time = 0.0;
};

MetricsSummary metrics(const SimTrace& trace);
std::string format_metrics(const MetricsSummary& summary, SimMode mode);

}  // namespace navcon
