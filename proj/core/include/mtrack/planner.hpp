#pragma once

#include "mtrack/bernstein.hpp"
#include "mtrack/cells.hpp"
#include "mtrack/corridor.hpp"
#include "mtrack/geom.hpp"
#include "mtrack/predict.hpp"
#include "mtrack/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mtrack {

/// First failed certificate of a primitive, in the canonical reporting order.
enum class CheckTag : std::uint8_t {
  passed = 0,
  corridor_visibility,  // piece control points leave a corridor region
  corridor_safety,      // piece control points leave the eroded region
  distance_min,
  distance_max,
  dynamic_collision,
  target_collision,
  dbvc,
  divc,
  dynamic_occlusion,
  vel_limit,
  acc_limit,
  yaw_limit,
};
inline constexpr int kCheckTagCount = 13;
const char* check_tag_name(CheckTag tag);

enum class CellMode { dynamic_cells, static_cells, no_cells };
enum class VisibilityMode { relaxed, conservative };

struct PlannerConfig {
  int sample_count = 1000;
  double horizon = 1.5;          // planning horizon T [s]
  int corridor_windows = 3;
  double d_min = 0.2;            // tracking distance band [m]
  double d_max = 1.2;
  double v_max = 2.0;            // dynamical limits
  double a_max = 5.0;
  double yaw_rate_max = M_PI;
  double sample_radius_lo = 0.3;  // terminal sampling annulus [m]
  double sample_radius_hi = 0.6;
  double sample_azimuth_lo = -M_PI;
  double sample_azimuth_hi = M_PI;
  double jerk_weight = 0.01;
  double desired_distance = 0.0;  // 0 selects (radius_lo + radius_hi) / 2
  int prediction_degree = 3;
  VisibilityMode visibility_mode = VisibilityMode::relaxed;
  CellMode cell_mode = CellMode::dynamic_cells;
  AlphaPolicy alpha_policy = AlphaPolicy::midpoint;

  double d_des() const {
    return desired_distance > 0.0 ? desired_distance : 0.5 * (sample_radius_lo + sample_radius_hi);
  }
  /// Throws std::invalid_argument on an inconsistent configuration
  /// (in particular d_min < target_radius + agent_radius).
  void validate(double target_radius, double agent_radius) const;
};

struct WorldAgentState {
  Vec2 position;
  Vec2 velocity;
};

/// Everything a planner instance may read at a replan instant: shared current
/// positions and velocities plus the static environment. Each agent plans
/// from the identical snapshot; no plans are exchanged.
struct WorldSnapshot {
  double time = 0.0;
  MovingObjectState target{Vec2::Zero(), Vec2::Zero(), 0.075};
  std::vector<MovingObjectState> obstacles;
  std::vector<WorldAgentState> agents;
  double agent_radius = 0.075;
  std::vector<Disc> static_discs;
  std::vector<AABB> static_boxes;
  AABB bounds{{-10.0, -10.0}, {10.0, 10.0}};
};

struct FeasibilityReport {
  std::array<int, kCheckTagCount> counts{};
  int total = 0;

  int passed() const { return counts[static_cast<int>(CheckTag::passed)]; }
  int& count(CheckTag tag) { return counts[static_cast<int>(tag)]; }
  int count(CheckTag tag) const { return counts[static_cast<int>(tag)]; }
};

/// Per-replan derived inputs for the feasibility battery, built once per
/// plan() call and shared read-only by all primitive checks.
struct CheckInputs {
  double horizon = 1.5;
  double agent_radius = 0.075;
  double target_radius = 0.075;
  PlanarCurve target_prediction{{Vec2::Zero(), Vec2::Zero()}, 1.0};

  struct Occluder {
    PlanarCurve prediction;
    double radius;
    bool in_collision_check;  // body-collision certificate applies
    bool in_occlusion_check;  // line-of-sight certificate applies
    // Agent-independent precomputation:
    PlanarCurve target_offset;        // x_q - x_o
    double target_gap_min_coeff;      // min coefficient of |x_q - x_o|^2
  };
  std::vector<Occluder> occluders;

  bool corridor_ok = false;
  std::string corridor_failure;
  std::vector<double> breakpoints;                       // interior window boundaries
  std::vector<std::vector<HalfPlane>> window_planes;     // per window, full region
  std::vector<std::vector<HalfPlane>> eroded_planes;     // per window, eroded region

  std::vector<MovingHalfSpace> dbvc;
  std::vector<DivcPair> divc;  // parallel to dbvc (cell modes only)

  double d_min2 = 0.0, d_max2 = 0.0, v_max2 = 0.0, a_max2 = 0.0, yaw_rate_max = 0.0;
  VisibilityMode visibility_mode = VisibilityMode::relaxed;
};

CheckInputs prepare_check_inputs(const WorldSnapshot& snapshot, int agent_id,
                                 const PlannerConfig& config);

/// Closed-form minimizer of the mean squared control effort for a double
/// integrator with fixed initial state, fixed terminal position and free
/// terminal velocity: a cubic whose terminal acceleration vanishes.
PlanarCurve solve_min_effort_primitive(const Vec2& x0, const Vec2& v0, const Vec2& xf, double T);

/// Terminal points around the target's predicted endpoint; radius and azimuth
/// drawn uniformly (radius first) per sample, deterministic for a given rng.
std::vector<Vec2> sample_terminal_points(const PlanarCurve& target_prediction,
                                         const PlannerConfig& config, Rng& rng);

/// Individual certificate groups. Each returns `passed` or its first failure
/// in the canonical order.
CheckTag check_collision(const CheckInputs& in, const PlanarCurve& primitive);
CheckTag check_visibility(const CheckInputs& in, const PlanarCurve& primitive);
CheckTag check_distance(const CheckInputs& in, const PlanarCurve& primitive);
CheckTag check_dynamics(const CheckInputs& in, const PlanarCurve& primitive);

/// Full battery in canonical order: corridor-visibility, corridor-safety,
/// distance, collision, visibility, dynamics.
CheckTag evaluate_primitive(const CheckInputs& in, const PlanarCurve& primitive);

/// Exact cost: jerk penalty plus tracking-distance penalty, both integrated
/// in closed form through the Bernstein integral identity.
double trajectory_cost(const PlanarCurve& primitive, const PlanarCurve& target_prediction,
                       double jerk_weight, double d_des);

/// Index of the cheapest passing primitive; ties break to the lowest index.
std::optional<std::size_t> select_best(std::span<const PlanarCurve> passing,
                                       const PlanarCurve& target_prediction,
                                       const PlannerConfig& config);

struct PlanResult {
  std::optional<PlanarCurve> trajectory;  // empty: keep previous trajectory
  FeasibilityReport report;
  double wall_time_ms = 0.0;
  int selected_index = -1;
  double selected_cost = 0.0;
  std::string diagnostic;
};

/// Sample-check-select planning pass for one agent against a snapshot.
/// Deterministic for a given (snapshot, config, seed) regardless of threads.
PlanResult plan(const WorldSnapshot& snapshot, int agent_id, const PlannerConfig& config,
                std::uint64_t seed, int threads = 1);

}  // namespace mtrack
