#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "navcon/control.hpp"
#include "navcon/potential.hpp"
#include "navcon/vec2.hpp"

namespace navcon {

enum class SimMode { formation, rendezvous };

/// Which edge set feeds the per-step Fiedler computation.
enum class FiedlerEdges { proximity, formation };

struct InitialAgent {
  Vec2 position{};
  double heading = 0.0;  // unused in formation mode

  bool operator==(const InitialAgent&) const = default;
};

/// Full experiment description. Parsed from a JSON document (see README for
/// the schema) or built programmatically; `run` consumes it as-is.
struct ScenarioSpec {
  SimMode mode = SimMode::formation;
  FieldParams params;
  double dt = 0.1;
  double duration = 50.0;
  ControlGains gains;
  std::uint64_t seed = 0;

  int random_agents = 0;             // > 0: deploy_connected instead of `agents`
  std::vector<InitialAgent> agents;  // explicit initial states
  std::vector<Vec2> obstacles;

  // Formation mode: desired relative positions c_ij, keyed (i, j). Parsing
  // fills the antisymmetric reverse entries, so both directions are present.
  std::map<std::pair<int, int>, Vec2> formation_offsets;

  // Rendezvous mode.
  Vec2 destination{};
  double goal_heading = 0.0;  // theta*
  int informed = 0;

  FiedlerEdges fiedler_edges = FiedlerEdges::proximity;

  int agent_count() const {
    return random_agents > 0 ? random_agents : static_cast<int>(agents.size());
  }

  /// Formation-neighbor ids of agent i (nodes with an offset entry (i, j)).
  std::vector<int> formation_neighbors_of(int i) const;

  /// Throws InvalidInput naming the offending field.
  void validate() const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Parses and validates a scenario document; unknown keys and keys that do
/// not apply to the document's mode are rejected.
ScenarioSpec parse_scenario(const std::string& text);

/// Canonical JSON form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

/// Seeded rejection sampling inside the workspace (margin delta1 from the
/// boundary, min pairwise separation delta1) until the proximity graph is
/// connected (formation) or has a directed spanning tree rooted at `informed`
/// (rendezvous). Headings are uniform in (-pi, pi] for rendezvous, 0 otherwise.
/// Throws RuntimeFailure after 10000 rejected samples.
std::vector<InitialAgent> deploy_connected(int n, const FieldParams& params,
                                           std::uint64_t seed, SimMode mode,
                                           int informed);

}  // namespace navcon
