#include "navcon/scenario.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "navcon/errors.hpp"
#include "navcon/graph.hpp"
#include "navcon/rng.hpp"

namespace navcon {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw InvalidInput("scenario: " + msg); }

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key()))
      fail("unknown key '" + item.key() + "' in " + where);
  }
}

double get_number(const ordered_json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail("field '" + key + "' must be a number");
  return obj[key].get<double>();
}

Vec2 get_point(const ordered_json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("field '" + key + "' must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::vector<int> ScenarioSpec::formation_neighbors_of(int i) const {
  std::vector<int> out;
  for (const auto& [key, c] : formation_offsets)
    if (key.first == i) out.push_back(key.second);
  return out;
}

void ScenarioSpec::validate() const {
  params.validate();
  gains.validate();
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(duration >= 0.0)) fail("duration must be >= 0");
  if (duration / dt > 5e6) fail("duration/dt exceeds the step budget");

  const int n = agent_count();
  if (n < 1) fail("at least one agent required ('agents')");
  if (random_agents > 0 && !agents.empty())
    fail("'agents' must be either explicit states or a random count, not both");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!agents[i].position.finite() || !std::isfinite(agents[i].heading))
      fail("agent " + std::to_string(i) + " has non-finite state");
    if (agents[i].position.norm() >= params.workspace_radius)
      fail("agent " + std::to_string(i) + " starts outside the workspace");
  }
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    if (!obstacles[k].finite())
      fail("obstacle " + std::to_string(k) + " has non-finite coordinates");
  }

  if (mode == SimMode::formation) {
    if (formation_offsets.empty()) fail("formation mode requires 'formation_offsets'");
    for (const auto& [key, c] : formation_offsets) {
      const auto [i, j] = key;
      if (i == j) fail("formation offset with i == j");
      if (i < 0 || j < 0 || i >= n || j >= n) fail("formation offset index out of range");
      if (!c.finite()) fail("formation offset (" + std::to_string(i) + "," +
                            std::to_string(j) + ") is non-finite");
      if (c.norm() >= params.comm_radius)
        fail("formation offset (" + std::to_string(i) + "," + std::to_string(j) +
             ") is not shorter than comm_radius");
      const auto rev = formation_offsets.find({j, i});
      if (rev != formation_offsets.end() && (c + rev->second).norm() > 1e-9)
        fail("formation offsets (" + std::to_string(i) + "," + std::to_string(j) +
             ") and reverse are not antisymmetric");
    }
  } else {
    if (informed < 0 || informed >= n) fail("'informed' id out of range");
    if (!destination.finite()) fail("'destination' is non-finite");
    if (destination.norm() >= params.workspace_radius)
      fail("'destination' must lie inside the workspace");
    if (!obstacles.empty())
      fail("'obstacles' are not supported in rendezvous mode (the rendezvous "
           "constraint function has connectivity factors only)");
    if (!formation_offsets.empty()) fail("'formation_offsets' not allowed in rendezvous mode");
  }
}

ScenarioSpec parse_scenario(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  if (!doc.contains("mode") || !doc["mode"].is_string()) fail("missing required field 'mode'");

  ScenarioSpec spec;
  const std::string mode = doc["mode"].get<std::string>();
  if (mode == "formation") {
    spec.mode = SimMode::formation;
    spec.params.alpha = 1.5;
    spec.params.workspace_radius = 10.0;
  } else if (mode == "rendezvous") {
    spec.mode = SimMode::rendezvous;
    spec.params.alpha = 1.2;
    spec.params.workspace_radius = 5.0;
  } else {
    fail("mode must be 'formation' or 'rendezvous'");
  }

  std::set<std::string> allowed = {"mode",       "workspace_radius", "comm_radius",
                                   "delta1",     "delta2",           "alpha",
                                   "eps_nh",     "dt",               "duration",
                                   "gains",      "seed",             "agents",
                                   "obstacles",  "fiedler_edges"};
  if (spec.mode == SimMode::formation) {
    allowed.insert("formation_offsets");
  } else {
    allowed.insert({"destination", "goal_heading", "informed"});
  }
  check_keys(doc, allowed, "scenario");

  spec.params.workspace_radius =
      get_number(doc, "workspace_radius", spec.params.workspace_radius);
  spec.params.comm_radius = get_number(doc, "comm_radius", spec.params.comm_radius);
  spec.params.delta1 = get_number(doc, "delta1", spec.params.delta1);
  spec.params.delta2 = get_number(doc, "delta2", spec.params.delta2);
  spec.params.alpha = get_number(doc, "alpha", spec.params.alpha);
  spec.params.eps_nh = get_number(doc, "eps_nh", spec.params.eps_nh);
  spec.dt = get_number(doc, "dt", spec.dt);
  spec.duration = get_number(doc, "duration", spec.duration);

  if (doc.contains("gains")) {
    const auto& g = doc["gains"];
    if (!g.is_object()) fail("'gains' must be an object");
    check_keys(g, {"K", "k_v", "k_w"}, "gains");
    spec.gains.K = get_number(g, "K", spec.gains.K);
    spec.gains.k_v = get_number(g, "k_v", spec.gains.k_v);
    spec.gains.k_w = get_number(g, "k_w", spec.gains.k_w);
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail("'seed' must be an integer");
    spec.seed = doc["seed"].get<std::uint64_t>();
  }

  if (!doc.contains("agents")) fail("missing required field 'agents'");
  const auto& agents = doc["agents"];
  if (agents.is_object()) {
    check_keys(agents, {"random"}, "agents");
    if (!agents.contains("random") || !agents["random"].is_number_integer())
      fail("'agents' object must be {\"random\": n}");
    spec.random_agents = agents["random"].get<int>();
    if (spec.random_agents < 1) fail("'agents.random' must be >= 1");
  } else if (agents.is_array()) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& a = agents[i];
      if (!a.is_object()) fail("each agent must be an object");
      check_keys(a, {"id", "x", "y", "heading"}, "agents[" + std::to_string(i) + "]");
      if (a.contains("id") && (!a["id"].is_number_integer() ||
                               a["id"].get<long long>() != static_cast<long long>(i)))
        fail("agent ids must match array order");
      if (!a.contains("x") || !a.contains("y")) fail("agent missing 'x'/'y'");
      InitialAgent st;
      st.position = {a["x"].get<double>(), a["y"].get<double>()};
      st.heading = wrap_angle(get_number(a, "heading", 0.0));
      spec.agents.push_back(st);
    }
    if (spec.agents.empty()) fail("'agents' array must not be empty");
  } else {
    fail("'agents' must be an array of states or {\"random\": n}");
  }

  if (doc.contains("obstacles")) {
    if (!doc["obstacles"].is_array()) fail("'obstacles' must be an array");
    for (const auto& o : doc["obstacles"]) spec.obstacles.push_back(get_point(o, "obstacles"));
  }

  if (spec.mode == SimMode::formation) {
    if (!doc.contains("formation_offsets")) fail("formation mode requires 'formation_offsets'");
    if (!doc["formation_offsets"].is_array()) fail("'formation_offsets' must be an array");
    for (const auto& e : doc["formation_offsets"]) {
      if (!e.is_object()) fail("each formation offset must be an object");
      check_keys(e, {"i", "j", "c"}, "formation_offsets");
      if (!e.contains("i") || !e.contains("j") || !e.contains("c"))
        fail("formation offset needs 'i', 'j' and 'c'");
      const int i = e["i"].get<int>();
      const int j = e["j"].get<int>();
      const Vec2 c = get_point(e["c"], "formation_offsets.c");
      if (spec.formation_offsets.count({i, j}))
        fail("duplicate formation offset (" + std::to_string(i) + "," + std::to_string(j) + ")");
      spec.formation_offsets[{i, j}] = c;
    }
    // Fill implied reverse entries so every node sees its neighbor set.
    const auto given = spec.formation_offsets;
    for (const auto& [key, c] : given) {
      if (!spec.formation_offsets.count({key.second, key.first}))
        spec.formation_offsets[{key.second, key.first}] = -c;
    }
  } else {
    if (doc.contains("destination")) spec.destination = get_point(doc["destination"], "destination");
    spec.goal_heading = wrap_angle(get_number(doc, "goal_heading", 0.0));
    if (doc.contains("informed")) {
      if (!doc["informed"].is_number_integer()) fail("'informed' must be an integer");
      spec.informed = doc["informed"].get<int>();
    }
  }

  if (doc.contains("fiedler_edges")) {
    const std::string fe = doc["fiedler_edges"].get<std::string>();
    if (fe == "proximity")
      spec.fiedler_edges = FiedlerEdges::proximity;
    else if (fe == "formation")
      spec.fiedler_edges = FiedlerEdges::formation;
    else
      fail("fiedler_edges must be 'proximity' or 'formation'");
  }

  spec.validate();
  return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  ordered_json doc;
  doc["mode"] = spec.mode == SimMode::formation ? "formation" : "rendezvous";
  doc["workspace_radius"] = spec.params.workspace_radius;
  doc["comm_radius"] = spec.params.comm_radius;
  doc["delta1"] = spec.params.delta1;
  doc["delta2"] = spec.params.delta2;
  doc["alpha"] = spec.params.alpha;
  doc["eps_nh"] = spec.params.eps_nh;
  doc["dt"] = spec.dt;
  doc["duration"] = spec.duration;
  doc["gains"] = {{"K", spec.gains.K}, {"k_v", spec.gains.k_v}, {"k_w", spec.gains.k_w}};
  doc["seed"] = spec.seed;

  if (spec.random_agents > 0) {
    doc["agents"] = {{"random", spec.random_agents}};
  } else {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
      ordered_json a;
      a["id"] = i;
      a["x"] = spec.agents[i].position.x;
      a["y"] = spec.agents[i].position.y;
      if (spec.mode == SimMode::rendezvous) a["heading"] = spec.agents[i].heading;
      arr.push_back(a);
    }
    doc["agents"] = arr;
  }

  if (!spec.obstacles.empty()) {
    ordered_json arr = ordered_json::array();
    for (const Vec2& o : spec.obstacles) arr.push_back({o.x, o.y});
    doc["obstacles"] = arr;
  }

  if (spec.mode == SimMode::formation) {
    ordered_json arr = ordered_json::array();
    for (const auto& [key, c] : spec.formation_offsets) {
      if (key.first < key.second)  // reverse entries are implied
        arr.push_back({{"i", key.first}, {"j", key.second}, {"c", {c.x, c.y}}});
    }
    doc["formation_offsets"] = arr;
  } else {
    doc["destination"] = {spec.destination.x, spec.destination.y};
    doc["goal_heading"] = spec.goal_heading;
    doc["informed"] = spec.informed;
  }
  doc["fiedler_edges"] =
      spec.fiedler_edges == FiedlerEdges::proximity ? "proximity" : "formation";

  return doc.dump(2) + "\n";
}

std::vector<InitialAgent> deploy_connected(int n, const FieldParams& params,
                                           std::uint64_t seed, SimMode mode,
                                           int informed) {
  if (n < 1) throw InvalidInput("deploy_connected: n must be >= 1");
  params.validate();
  if (informed < 0 || informed >= n)
    throw InvalidInput("deploy_connected: informed id out of range");

  SeededRng rng(seed);
  const double rmax = params.workspace_radius - params.delta1;
  if (rmax <= 0.0)
    throw InvalidInput("deploy_connected: workspace too small for the boundary margin");

  constexpr int kSampleBudget = 10000;
  int attempts = 0;
  std::vector<Vec2> positions;
  for (;;) {
    positions.clear();
    bool layout_ok = true;
    for (int i = 0; i < n && layout_ok; ++i) {
      for (;;) {
        if (++attempts > kSampleBudget)
          throw RuntimeFailure(
              "deploy_connected: no feasible layout within 10000 samples; "
              "enlarge the workspace, raise comm_radius, or reduce n");
        const double r = rmax * std::sqrt(rng.uniform01());
        const double a = rng.angle();
        const Vec2 p{r * std::cos(a), r * std::sin(a)};
        bool separated = true;
        for (const Vec2& q : positions)
          if (distance(p, q) < params.delta1) {
            separated = false;
            break;
          }
        if (separated) {
          positions.push_back(p);
          break;
        }
      }
    }

    const ProximityGraph g = build_proximity_graph(positions, params.comm_radius,
                                                   mode == SimMode::rendezvous);
    const bool ok = mode == SimMode::formation ? bfs_connected(g)
                                               : has_directed_spanning_tree(g, informed);
    if (ok) break;
  }

  std::vector<InitialAgent> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].position = positions[i];
    out[i].heading = mode == SimMode::rendezvous ? rng.angle() : 0.0;
  }
  return out;
}

}  // namespace navcon
