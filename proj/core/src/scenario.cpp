#include "mtrack/scenario.hpp"

#include "mtrack/rng.hpp"
#include "mtrack/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mtrack {

using nlohmann::json;

namespace {

int segment_index(const std::vector<double>& times, double t) {
  // Last segment whose start is <= t; valid for t within [times.front(), times.back()).
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const int i = static_cast<int>(it - times.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(times.size()) - 2);
}

Vec2 catmull_rom_tangent(const WaypointScript& s, int i) {
  const int n = static_cast<int>(s.points.size());
  const int a = std::max(i - 1, 0);
  const int b = std::min(i + 1, n - 1);
  return (s.points[b] - s.points[a]) / (s.times[b] - s.times[a]);
}

}  // namespace

Vec2 WaypointScript::position(double t) const {
  if (points.empty()) return Vec2::Zero();
  if (points.size() == 1 || t <= times.front()) return points.front();
  if (t >= times.back()) return points.back();
  const int i = segment_index(times, t);
  const double h = times[i + 1] - times[i];
  const double u = (t - times[i]) / h;
  if (interp == Interp::linear) {
    return (1.0 - u) * points[i] + u * points[i + 1];
  }
  const Vec2 m0 = catmull_rom_tangent(*this, i) * h;
  const Vec2 m1 = catmull_rom_tangent(*this, i + 1) * h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * points[i] + (u3 - 2 * u2 + u) * m0 +
         (-2 * u3 + 3 * u2) * points[i + 1] + (u3 - u2) * m1;
}

Vec2 WaypointScript::velocity(double t) const {
  if (points.size() < 2 || t < times.front() || t >= times.back()) return Vec2::Zero();
  const int i = segment_index(times, t);
  const double h = times[i + 1] - times[i];
  if (interp == Interp::linear) {
    return (points[i + 1] - points[i]) / h;
  }
  const Vec2 m0 = catmull_rom_tangent(*this, i) * h;
  const Vec2 m1 = catmull_rom_tangent(*this, i + 1) * h;
  const double u = (t - times[i]) / h;
  const double u2 = u * u;
  const Vec2 d = (6 * u2 - 6 * u) * points[i] + (3 * u2 - 4 * u + 1) * m0 +
                 (-6 * u2 + 6 * u) * points[i + 1] + (3 * u2 - 2 * u) * m1;
  return d / h;
}

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

Vec2 parse_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw ScenarioParseError(std::string(what) + ": expected [x, y]", 0);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

WaypointScript parse_script(const json& j, const char* what) {
  WaypointScript s;
  s.radius = j.value("radius", 0.075);
  const std::string interp = j.value("interp", "linear");
  if (interp == "linear") {
    s.interp = WaypointScript::Interp::linear;
  } else if (interp == "cubic") {
    s.interp = WaypointScript::Interp::cubic;
  } else {
    throw ScenarioParseError(std::string(what) + ": unknown interp '" + interp + "'", 0);
  }
  if (!j.contains("waypoints") || !j["waypoints"].is_array() || j["waypoints"].empty()) {
    throw ScenarioParseError(std::string(what) + ": waypoints required", 0);
  }
  for (const auto& row : j["waypoints"]) {
    if (!row.is_array() || row.size() != 3) {
      throw ScenarioParseError(std::string(what) + ": waypoint rows are [t, x, y]", 0);
    }
    s.times.push_back(row[0].get<double>());
    s.points.emplace_back(row[1].get<double>(), row[2].get<double>());
  }
  return s;
}

json script_to_json(const WaypointScript& s) {
  json j;
  j["radius"] = s.radius;
  j["interp"] = s.interp == WaypointScript::Interp::linear ? "linear" : "cubic";
  json wps = json::array();
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    wps.push_back({s.times[i], s.points[i].x(), s.points[i].y()});
  }
  j["waypoints"] = std::move(wps);
  return j;
}

VisibilityMode parse_visibility_mode(const std::string& v) {
  if (v == "relaxed") return VisibilityMode::relaxed;
  if (v == "conservative") return VisibilityMode::conservative;
  throw ScenarioParseError("planner.visibility_mode: unknown value '" + v + "'", 0);
}

CellMode parse_cell_mode(const std::string& v) {
  if (v == "dynamic") return CellMode::dynamic_cells;
  if (v == "static") return CellMode::static_cells;
  if (v == "none") return CellMode::no_cells;
  throw ScenarioParseError("planner.cell_mode: unknown value '" + v + "'", 0);
}

AlphaPolicy parse_alpha_policy(const std::string& v) {
  if (v == "midpoint") return AlphaPolicy::midpoint;
  if (v == "min") return AlphaPolicy::min_alpha;
  if (v == "max") return AlphaPolicy::max_alpha;
  throw ScenarioParseError("planner.alpha_policy: unknown value '" + v + "'", 0);
}

const char* visibility_mode_name(VisibilityMode m) {
  return m == VisibilityMode::relaxed ? "relaxed" : "conservative";
}
const char* cell_mode_name(CellMode m) {
  switch (m) {
    case CellMode::dynamic_cells: return "dynamic";
    case CellMode::static_cells: return "static";
    case CellMode::no_cells: return "none";
  }
  return "dynamic";
}
const char* alpha_policy_name(AlphaPolicy p) {
  switch (p) {
    case AlphaPolicy::midpoint: return "midpoint";
    case AlphaPolicy::min_alpha: return "min";
    case AlphaPolicy::max_alpha: return "max";
  }
  return "midpoint";
}

PlannerConfig parse_planner(const json& j) {
  PlannerConfig c;
  c.sample_count = j.value("sample_count", c.sample_count);
  c.horizon = j.value("horizon", c.horizon);
  c.corridor_windows = j.value("corridor_windows", c.corridor_windows);
  c.d_min = j.value("d_min", c.d_min);
  c.d_max = j.value("d_max", c.d_max);
  c.v_max = j.value("v_max", c.v_max);
  c.a_max = j.value("a_max", c.a_max);
  c.yaw_rate_max = j.value("yaw_rate_max", c.yaw_rate_max);
  if (j.contains("sample_radius")) {
    c.sample_radius_lo = j["sample_radius"][0].get<double>();
    c.sample_radius_hi = j["sample_radius"][1].get<double>();
  }
  if (j.contains("sample_azimuth")) {
    c.sample_azimuth_lo = j["sample_azimuth"][0].get<double>();
    c.sample_azimuth_hi = j["sample_azimuth"][1].get<double>();
  }
  c.jerk_weight = j.value("jerk_weight", c.jerk_weight);
  c.desired_distance = j.value("desired_distance", c.desired_distance);
  c.prediction_degree = j.value("prediction_degree", c.prediction_degree);
  if (j.contains("visibility_mode")) {
    c.visibility_mode = parse_visibility_mode(j["visibility_mode"].get<std::string>());
  }
  if (j.contains("cell_mode")) c.cell_mode = parse_cell_mode(j["cell_mode"].get<std::string>());
  if (j.contains("alpha_policy")) {
    c.alpha_policy = parse_alpha_policy(j["alpha_policy"].get<std::string>());
  }
  return c;
}

json planner_to_json(const PlannerConfig& c) {
  json j;
  j["sample_count"] = c.sample_count;
  j["horizon"] = c.horizon;
  j["corridor_windows"] = c.corridor_windows;
  j["d_min"] = c.d_min;
  j["d_max"] = c.d_max;
  j["v_max"] = c.v_max;
  j["a_max"] = c.a_max;
  j["yaw_rate_max"] = c.yaw_rate_max;
  j["sample_radius"] = {c.sample_radius_lo, c.sample_radius_hi};
  j["sample_azimuth"] = {c.sample_azimuth_lo, c.sample_azimuth_hi};
  j["jerk_weight"] = c.jerk_weight;
  j["desired_distance"] = c.desired_distance;
  j["prediction_degree"] = c.prediction_degree;
  j["visibility_mode"] = visibility_mode_name(c.visibility_mode);
  j["cell_mode"] = cell_mode_name(c.cell_mode);
  j["alpha_policy"] = alpha_policy_name(c.alpha_policy);
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(e.what(), line_of_byte(text, e.byte));
  }
  Scenario sc;
  sc.version = j.value("version", 1);
  if (sc.version != 1) throw ScenarioParseError("unsupported scenario version", 0);
  sc.name = j.value("name", sc.name);
  sc.seed = j.value("seed", sc.seed);
  sc.duration = j.value("duration", sc.duration);
  sc.tick = j.value("tick", sc.tick);
  sc.replan_period = j.value("replan_period", sc.replan_period);
  if (j.contains("bounds")) {
    sc.bounds.min = parse_vec2(j["bounds"]["min"], "bounds.min");
    sc.bounds.max = parse_vec2(j["bounds"]["max"], "bounds.max");
  }
  if (!j.contains("target")) throw ScenarioParseError("target script required", 0);
  sc.target = parse_script(j["target"], "target");
  for (const auto& o : j.value("dynamic_obstacles", json::array())) {
    sc.dynamic_obstacles.push_back(parse_script(o, "dynamic_obstacles"));
  }
  for (const auto& d : j.value("static_discs", json::array())) {
    sc.static_discs.push_back({parse_vec2(d["center"], "static_discs.center"),
                               d["radius"].get<double>()});
  }
  for (const auto& b : j.value("static_boxes", json::array())) {
    sc.static_boxes.push_back({parse_vec2(b["min"], "static_boxes.min"),
                               parse_vec2(b["max"], "static_boxes.max")});
  }
  if (!j.contains("agents") || !j["agents"].is_array() || j["agents"].empty()) {
    throw ScenarioParseError("at least one agent required", 0);
  }
  for (const auto& a : j["agents"]) {
    ScenarioAgent agent{parse_vec2(a["position"], "agents.position"), std::nullopt};
    if (a.contains("azimuth_bounds")) {
      agent.azimuth_bounds = {{a["azimuth_bounds"][0].get<double>(),
                               a["azimuth_bounds"][1].get<double>()}};
    }
    sc.agents.push_back(std::move(agent));
  }
  sc.agent_radius = j.value("agent_radius", sc.agent_radius);
  sc.measurement_noise = j.value("measurement_noise", sc.measurement_noise);
  if (j.contains("planner")) sc.planner = parse_planner(j["planner"]);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioParseError("cannot open scenario file: " + path, 0);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["version"] = sc.version;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["duration"] = sc.duration;
  j["tick"] = sc.tick;
  j["replan_period"] = sc.replan_period;
  j["bounds"] = {{"min", {sc.bounds.min.x(), sc.bounds.min.y()}},
                 {"max", {sc.bounds.max.x(), sc.bounds.max.y()}}};
  j["target"] = script_to_json(sc.target);
  json obstacles = json::array();
  for (const auto& o : sc.dynamic_obstacles) obstacles.push_back(script_to_json(o));
  j["dynamic_obstacles"] = std::move(obstacles);
  json discs = json::array();
  for (const auto& d : sc.static_discs) {
    discs.push_back({{"center", {d.center.x(), d.center.y()}}, {"radius", d.radius}});
  }
  j["static_discs"] = std::move(discs);
  json boxes = json::array();
  for (const auto& b : sc.static_boxes) {
    boxes.push_back({{"min", {b.min.x(), b.min.y()}}, {"max", {b.max.x(), b.max.y()}}});
  }
  j["static_boxes"] = std::move(boxes);
  json agents = json::array();
  for (const auto& a : sc.agents) {
    json aj{{"position", {a.position.x(), a.position.y()}}};
    if (a.azimuth_bounds) {
      aj["azimuth_bounds"] = {a.azimuth_bounds->first, a.azimuth_bounds->second};
    }
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  j["agent_radius"] = sc.agent_radius;
  j["measurement_noise"] = sc.measurement_noise;
  j["planner"] = planner_to_json(sc.planner);
  return j.dump(2) + "\n";
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> errors;
  auto err = [&](const std::string& e) { errors.push_back(e); };

  if (sc.version != 1) err("version must be 1");
  if (!(sc.tick > 0.0)) err("tick must be positive");
  if (sc.duration < 0.0) err("duration must be nonnegative");
  if (!(sc.replan_period >= sc.tick)) err("replan_period must be >= tick");
  if (sc.tick > 0.0) {
    const double ratio = sc.replan_period / sc.tick;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
      err("replan_period must be an integer multiple of tick");
    }
  }
  if (sc.measurement_noise < 0.0) err("measurement_noise must be nonnegative");
  if (!(sc.agent_radius > 0.0)) err("agent_radius must be positive");
  if (sc.agents.empty()) err("at least one agent required");

  auto check_script = [&](const WaypointScript& s, const std::string& what) {
    if (s.times.empty()) {
      err(what + ": waypoints required");
      return;
    }
    if (s.times.front() != 0.0) err(what + ": first waypoint time must be 0");
    for (std::size_t i = 1; i < s.times.size(); ++i) {
      if (!(s.times[i] > s.times[i - 1])) err(what + ": waypoint times must increase");
    }
    if (!(s.radius > 0.0)) err(what + ": radius must be positive");
    for (const Vec2& p : s.points) {
      if (!sc.bounds.contains(p)) err(what + ": waypoint outside bounds");
    }
  };
  check_script(sc.target, "target");
  for (std::size_t k = 0; k < sc.dynamic_obstacles.size(); ++k) {
    check_script(sc.dynamic_obstacles[k], "dynamic_obstacles[" + std::to_string(k) + "]");
  }
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    if (!sc.bounds.contains(sc.agents[i].position)) {
      err("agents[" + std::to_string(i) + "]: position outside bounds");
    }
    if (sc.agents[i].azimuth_bounds &&
        !(sc.agents[i].azimuth_bounds->first <= sc.agents[i].azimuth_bounds->second)) {
      err("agents[" + std::to_string(i) + "]: azimuth bounds out of order");
    }
  }
  try {
    sc.planner.validate(sc.target.radius, sc.agent_radius);
  } catch (const std::invalid_argument& e) {
    err(e.what());
  }
  if (!errors.empty()) return errors;

  // Initial feasibility: every safety and visibility metric strictly positive.
  std::vector<Vec2> agent_pos;
  for (const auto& a : sc.agents) agent_pos.push_back(a.position);
  std::vector<Disc> moving;
  for (const auto& o : sc.dynamic_obstacles) moving.push_back({o.position(0.0), o.radius});
  const MetricsRecord m0 = compute_metrics(
      0.0, WorldGeometry{agent_pos, sc.agent_radius, sc.target.position(0.0), sc.target.radius,
                         moving, sc.static_discs, sc.static_boxes});
  if (!(m0.chi1 > 0.0)) err("initial agent-obstacle contact (chi1 <= 0)");
  if (!(m0.chi2 > 0.0)) err("initial inter-agent contact (chi2 <= 0)");
  if (!(m0.chi3 > 0.0)) err("initial agent-target contact (chi3 <= 0)");
  if (!(m0.phi1 > 0.0)) err("initial line-of-sight blocked by obstacle (phi1 <= 0)");
  if (!(m0.phi2 > 0.0)) err("initial line-of-sight blocked by agent (phi2 <= 0)");
  return errors;
}

void apply_override(Scenario& sc, const std::string& key, const std::string& value) {
  auto as_double = [&] { return std::stod(value); };
  auto as_int = [&] { return std::stoi(value); };
  auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };

  if (key == "seed") sc.seed = as_u64();
  else if (key == "name") sc.name = value;
  else if (key == "duration") sc.duration = as_double();
  else if (key == "tick") sc.tick = as_double();
  else if (key == "replan_period") sc.replan_period = as_double();
  else if (key == "agent_radius") sc.agent_radius = as_double();
  else if (key == "measurement_noise") sc.measurement_noise = as_double();
  else if (key == "planner.sample_count") sc.planner.sample_count = as_int();
  else if (key == "planner.horizon") sc.planner.horizon = as_double();
  else if (key == "planner.corridor_windows") sc.planner.corridor_windows = as_int();
  else if (key == "planner.d_min") sc.planner.d_min = as_double();
  else if (key == "planner.d_max") sc.planner.d_max = as_double();
  else if (key == "planner.v_max") sc.planner.v_max = as_double();
  else if (key == "planner.a_max") sc.planner.a_max = as_double();
  else if (key == "planner.yaw_rate_max") sc.planner.yaw_rate_max = as_double();
  else if (key == "planner.sample_radius_lo") sc.planner.sample_radius_lo = as_double();
  else if (key == "planner.sample_radius_hi") sc.planner.sample_radius_hi = as_double();
  else if (key == "planner.sample_azimuth_lo") sc.planner.sample_azimuth_lo = as_double();
  else if (key == "planner.sample_azimuth_hi") sc.planner.sample_azimuth_hi = as_double();
  else if (key == "planner.jerk_weight") sc.planner.jerk_weight = as_double();
  else if (key == "planner.desired_distance") sc.planner.desired_distance = as_double();
  else if (key == "planner.prediction_degree") sc.planner.prediction_degree = as_int();
  else if (key == "planner.visibility_mode") sc.planner.visibility_mode = parse_visibility_mode(value);
  else if (key == "planner.cell_mode") sc.planner.cell_mode = parse_cell_mode(value);
  else if (key == "planner.alpha_policy") sc.planner.alpha_policy = parse_alpha_policy(value);
  else throw std::invalid_argument("unknown override key: " + key);
}

namespace {

// Random roaming waypoint script: legs to uniform points in the square,
// traversed at a fraction of the speed cap, covering at least `duration`.
WaypointScript roam_script(Rng& rng, const Vec2& start, double half_extent, double speed_cap,
                           double duration, double radius) {
  WaypointScript s;
  s.radius = radius;
  s.times.push_back(0.0);
  s.points.push_back(start);
  double t = 0.0;
  Vec2 cur = start;
  int guard = 0;
  while (t < duration && guard++ < 1000) {
    const Vec2 next(rng.uniform(-half_extent, half_extent), rng.uniform(-half_extent, half_extent));
    const double dist = (next - cur).norm();
    if (dist < 0.4 * half_extent) continue;  // skip short hops to keep it moving
    const double speed = speed_cap * rng.uniform(0.75, 1.0);
    t += dist / speed;
    s.times.push_back(t);
    s.points.push_back(next);
    cur = next;
  }
  return s;
}

std::vector<ScenarioAgent> ring_agents(Rng& rng, const Vec2& center, double ring_radius, int n) {
  std::vector<ScenarioAgent> agents;
  const double base = rng.uniform(0.0, 2.0 * M_PI);
  for (int i = 0; i < n; ++i) {
    const double a = base + 2.0 * M_PI * i / n;
    agents.push_back({center + ring_radius * Vec2(std::cos(a), std::sin(a)), std::nullopt});
  }
  return agents;
}

}  // namespace

Scenario random_empty_space_scenario(const EmptySpaceParams& params, std::uint64_t seed) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    Rng rng(derive_seed(seed, 0xE5, attempt));
    Scenario sc;
    sc.name = "empty_space";
    sc.seed = seed;
    sc.duration = params.duration;
    const double d_des = 0.5 * (params.sample_radius_lo + params.sample_radius_hi);
    const double half = params.roam_half_extent + params.sample_radius_hi + 1.0;
    sc.bounds = {{-half, -half}, {half, half}};
    sc.target = roam_script(rng, Vec2::Zero(), params.roam_half_extent, params.target_speed,
                            params.duration + 2.0, 0.075);
    sc.agents = ring_agents(rng, Vec2::Zero(), d_des, params.agents);
    sc.planner.sample_radius_lo = params.sample_radius_lo;
    sc.planner.sample_radius_hi = params.sample_radius_hi;
    sc.planner.d_max = 2.0 * params.sample_radius_hi;
    if (validate_scenario(sc).empty()) return sc;
  }
  throw std::runtime_error("random_empty_space_scenario: no valid configuration found");
}

Scenario random_dynamic_scenario(const DynamicWorldParams& params, std::uint64_t seed) {
  const double r_o = 0.075;
  for (int attempt = 0; attempt < 50; ++attempt) {
    Rng rng(derive_seed(seed, 0xD1, attempt));
    Scenario sc;
    sc.name = "dynamic_world";
    sc.seed = seed;
    sc.duration = params.duration;
    const double d_des = 0.5 * (params.sample_radius_lo + params.sample_radius_hi);
    const double half = params.roam_half_extent + params.sample_radius_hi + 1.0;
    sc.bounds = {{-half, -half}, {half, half}};
    sc.target = roam_script(rng, Vec2::Zero(), params.roam_half_extent, params.speed,
                            params.duration + 2.0, 0.075);
    sc.agents = ring_agents(rng, Vec2::Zero(), d_des, params.agents);
    sc.planner.sample_radius_lo = params.sample_radius_lo;
    sc.planner.sample_radius_hi = params.sample_radius_hi;
    sc.planner.d_max = 2.0 * params.sample_radius_hi;

    const double horizon_pad = sc.planner.horizon;
    bool ok = true;
    for (int k = 0; k < params.obstacles && ok; ++k) {
      bool placed = false;
      for (int trial = 0; trial < 60 && !placed; ++trial) {
        const Vec2 start(rng.uniform(-params.roam_half_extent, params.roam_half_extent),
                         rng.uniform(-params.roam_half_extent, params.roam_half_extent));
        // Keep starts clear of the initial formation and its lines of sight.
        if ((start - sc.target.position(0.0)).norm() < r_o + 0.075 + 0.3) continue;
        bool clear = true;
        for (const auto& a : sc.agents) {
          if ((start - a.position).norm() < r_o + sc.agent_radius + 0.2) clear = false;
          if (point_segment_distance(start, a.position, sc.target.position(0.0)) <
              r_o + sc.agent_radius + 0.1) {
            clear = false;
          }
        }
        if (!clear) continue;
        WaypointScript script = roam_script(rng, start, params.roam_half_extent, params.speed,
                                            params.duration + 2.0, r_o);
        // Obstacles must not run into the target itself.
        bool misses_target = true;
        for (double t = 0.0; t <= params.duration + horizon_pad; t += 0.05) {
          if ((script.position(t) - sc.target.position(t)).norm() < r_o + sc.target.radius + 0.15) {
            misses_target = false;
            break;
          }
        }
        if (!misses_target) continue;
        sc.dynamic_obstacles.push_back(std::move(script));
        placed = true;
      }
      if (!placed) ok = false;
    }
    if (!ok) continue;
    if (validate_scenario(sc).empty()) return sc;
  }
  throw std::runtime_error("random_dynamic_scenario: no valid configuration found");
}

}  // namespace mtrack
