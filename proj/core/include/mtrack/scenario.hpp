#pragma once

#include "mtrack/planner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mtrack {

/// Scripted motion through waypoints. `linear` keeps a constant velocity on
/// each leg, which a constant-velocity predictor reproduces exactly within a
/// replan cycle; `cubic` (Catmull-Rom) deliberately violates that assumption
/// for robustness studies. Past the last waypoint the object stops.
struct WaypointScript {
  enum class Interp { linear, cubic };
  Interp interp = Interp::linear;
  std::vector<double> times;  // strictly increasing, first entry 0
  std::vector<Vec2> points;
  double radius = 0.075;

  Vec2 position(double t) const;
  Vec2 velocity(double t) const;
  double end_time() const { return times.empty() ? 0.0 : times.back(); }
};

struct ScenarioAgent {
  Vec2 position;
  // Optional per-agent terminal-sampling sector; full circle otherwise.
  std::optional<std::pair<double, double>> azimuth_bounds;
};

struct Scenario {
  int version = 1;
  std::string name = "unnamed";
  std::uint64_t seed = 1;
  double duration = 20.0;
  double tick = 0.01;
  double replan_period = 0.1;
  AABB bounds{{-4.0, -4.0}, {4.0, 4.0}};
  WaypointScript target;
  std::vector<WaypointScript> dynamic_obstacles;
  std::vector<Disc> static_discs;
  std::vector<AABB> static_boxes;
  std::vector<ScenarioAgent> agents;
  double agent_radius = 0.075;
  double measurement_noise = 0.0;  // std-dev of position noise fed to planners
  PlannerConfig planner;
};

/// Thrown on malformed scenario text; line is 1-based when known, else 0.
struct ScenarioParseError : std::runtime_error {
  int line;
  ScenarioParseError(const std::string& what, int line_) : std::runtime_error(what), line(line_) {}
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& sc);

/// Structural and initial-feasibility validation; empty result means valid.
/// Initial feasibility demands every safety and visibility metric > 0 at t=0.
std::vector<std::string> validate_scenario(const Scenario& sc);

/// Applies a dotted-key override such as "planner.sample_count=500",
/// "duration=10" or "planner.cell_mode=static". Throws std::invalid_argument
/// on unknown keys or unparseable values.
void apply_override(Scenario& sc, const std::string& key, const std::string& value);

/// Benchmark scenario in an obstacle-free space: target roams a square at a
/// speed cap, trackers start on a ring at the desired tracking distance.
struct EmptySpaceParams {
  int agents = 3;
  double sample_radius_lo = 0.4;
  double sample_radius_hi = 1.2;
  double target_speed = 1.0;
  double duration = 20.0;
  double roam_half_extent = 2.2;  // target waypoint area half-size
};
Scenario random_empty_space_scenario(const EmptySpaceParams& params, std::uint64_t seed);

/// Benchmark scenario with dynamic obstacles roaming the same square as the
/// target. Obstacle scripts are regenerated until they keep clear of the
/// target path, so tracking remains achievable in principle.
struct DynamicWorldParams {
  int agents = 3;
  int obstacles = 10;
  double speed = 0.5;  // cap for both target and obstacles
  double duration = 20.0;
  double roam_half_extent = 2.6;
  double sample_radius_lo = 0.3;
  double sample_radius_hi = 0.6;
};
Scenario random_dynamic_scenario(const DynamicWorldParams& params, std::uint64_t seed);

}  // namespace mtrack
