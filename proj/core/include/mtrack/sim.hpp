#pragma once

#include "mtrack/scenario.hpp"

#include <iosfwd>
#include <vector>

namespace mtrack {

/// Per-tick safety and visibility distances, all clamped at contact (= 0).
/// chi1: agent surface to nearest obstacle; chi2: closest agent pair;
/// chi3: agent surface to target; phi1: line-of-sight to nearest obstacle;
/// phi2: line-of-sight to other agents. Minima over empty sets are +inf.
struct MetricsRecord {
  double t;
  double chi1, chi2, chi3, phi1, phi2;
};

struct WorldGeometry {
  std::span<const Vec2> agent_positions;
  double agent_radius;
  Vec2 target_position;
  double target_radius;
  std::span<const Disc> moving_discs;  // dynamic obstacles at this instant
  std::span<const Disc> static_discs;
  std::span<const AABB> static_boxes;
};

MetricsRecord compute_metrics(double t, const WorldGeometry& world);

enum class FailureKind {
  none,
  obstacle_collision,     // chi1 hit zero
  inter_agent_collision,  // chi2
  target_collision,       // chi3
  obstacle_occlusion,     // phi1
  inter_agent_occlusion,  // phi2
};
const char* failure_kind_name(FailureKind kind);

struct SuccessReport {
  bool success = true;
  FailureKind first_failure = FailureKind::none;
  double t_first_failure = -1.0;
  std::array<double, 5> minima{};  // chi1, chi2, chi3, phi1, phi2
  std::array<double, 5> means{};
};

SuccessReport evaluate_success(std::span<const MetricsRecord> history);

struct PlanLogEntry {
  int cycle;
  double t;
  int agent;
  bool planned;  // false: kept previous trajectory (or hovering)
  int samples_passed;
  std::array<int, kCheckTagCount> fail_counts;
  double wall_ms;
  double cost;
  std::string diagnostic;
};

struct TrajectoryLogEntry {
  int cycle;
  double t;
  int agent;
  PlanarCurve curve;
};

struct SimOptions {
  int threads = 1;           // parallel primitive checking inside plan()
  bool record_trajectories = true;
  bool stop_on_failure = false;  // terminate the run at the first metric hit
};

/// Deterministic lockstep simulation: at every replan boundary all agents plan
/// against one identical snapshot (shared current positions, one shared
/// prediction input); trajectories are tracked perfectly between boundaries.
class Simulation {
 public:
  explicit Simulation(Scenario scenario, SimOptions options = {});

  void run();
  bool step();  // one tick; returns false once finished

  double time() const { return tick_index_ * scenario_.tick; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<MetricsRecord>& metrics() const { return metrics_; }
  const std::vector<PlanLogEntry>& plan_log() const { return plan_log_; }
  const std::vector<TrajectoryLogEntry>& trajectory_log() const { return trajectory_log_; }
  SuccessReport success() const { return evaluate_success(metrics_); }

  /// Ground-truth snapshot the planners would see at the current time.
  WorldSnapshot snapshot() const;

  void write_metrics_csv(std::ostream& os) const;
  void write_plan_log_csv(std::ostream& os) const;
  void write_trajectory_csv(std::ostream& os) const;

 private:
  void replan(int cycle);
  void record_metrics();

  struct AgentExec {
    Vec2 position;
    Vec2 velocity;
    PlanarCurve curve;
    PlanarCurve curve_velocity;
    double curve_start = 0.0;
    bool has_curve = false;
  };

  Scenario scenario_;
  SimOptions options_;
  int tick_index_ = 0;
  int total_ticks_ = 0;
  int ticks_per_cycle_ = 0;
  bool halted_ = false;
  std::vector<AgentExec> agents_;
  std::vector<MetricsRecord> metrics_;
  std::vector<PlanLogEntry> plan_log_;
  std::vector<TrajectoryLogEntry> trajectory_log_;
};

}  // namespace mtrack
