#include "mtrack/sim.hpp"

#include "mtrack/rng.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace mtrack {

namespace {

double clamp0(double d) { return d > 0.0 ? d : 0.0; }

void fmt(std::ostream& os, const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  os << buf;
}

}  // namespace

MetricsRecord compute_metrics(double t, const WorldGeometry& w) {
  const double inf = std::numeric_limits<double>::infinity();
  MetricsRecord r{t, inf, inf, inf, inf, inf};
  const int n = static_cast<int>(w.agent_positions.size());

  for (int i = 0; i < n; ++i) {
    const Vec2& p = w.agent_positions[i];
    for (const Disc& d : w.moving_discs) {
      r.chi1 = std::min(r.chi1, clamp0((p - d.center).norm() - d.radius - w.agent_radius));
    }
    for (const Disc& d : w.static_discs) {
      r.chi1 = std::min(r.chi1, clamp0((p - d.center).norm() - d.radius - w.agent_radius));
    }
    for (const AABB& b : w.static_boxes) {
      r.chi1 = std::min(r.chi1, clamp0(point_aabb_distance(p, b) - w.agent_radius));
    }
    for (int j = i + 1; j < n; ++j) {
      r.chi2 = std::min(
          r.chi2, clamp0((p - w.agent_positions[j]).norm() - 2.0 * w.agent_radius));
    }
    r.chi3 = std::min(
        r.chi3, clamp0((p - w.target_position).norm() - w.agent_radius - w.target_radius));

    // Line-of-sight clearances.
    for (const Disc& d : w.moving_discs) {
      r.phi1 = std::min(
          r.phi1, clamp0(point_segment_distance(d.center, p, w.target_position) - d.radius));
    }
    for (const Disc& d : w.static_discs) {
      r.phi1 = std::min(
          r.phi1, clamp0(point_segment_distance(d.center, p, w.target_position) - d.radius));
    }
    for (const AABB& b : w.static_boxes) {
      r.phi1 = std::min(r.phi1, clamp0(segment_aabb_distance(p, w.target_position, b)));
    }
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      r.phi2 = std::min(r.phi2, clamp0(point_segment_distance(w.agent_positions[j], p,
                                                              w.target_position) -
                                       w.agent_radius));
    }
  }
  return r;
}

const char* failure_kind_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::none: return "none";
    case FailureKind::obstacle_collision: return "obstacle_collision";
    case FailureKind::inter_agent_collision: return "inter_agent_collision";
    case FailureKind::target_collision: return "target_collision";
    case FailureKind::obstacle_occlusion: return "obstacle_occlusion";
    case FailureKind::inter_agent_occlusion: return "inter_agent_occlusion";
  }
  return "unknown";
}

SuccessReport evaluate_success(std::span<const MetricsRecord> history) {
  SuccessReport rep;
  rep.minima.fill(std::numeric_limits<double>::infinity());
  rep.means.fill(0.0);
  if (history.empty()) return rep;
  for (const MetricsRecord& m : history) {
    const double vals[5] = {m.chi1, m.chi2, m.chi3, m.phi1, m.phi2};
    for (int k = 0; k < 5; ++k) {
      rep.minima[k] = std::min(rep.minima[k], vals[k]);
      rep.means[k] += vals[k];
    }
    if (rep.success) {
      for (int k = 0; k < 5; ++k) {
        if (vals[k] <= 0.0) {
          rep.success = false;
          rep.first_failure = static_cast<FailureKind>(k + 1);
          rep.t_first_failure = m.t;
          break;
        }
      }
    }
  }
  for (double& m : rep.means) m /= static_cast<double>(history.size());
  return rep;
}

Simulation::Simulation(Scenario scenario, SimOptions options)
    : scenario_(std::move(scenario)), options_(options) {
  const auto errors = validate_scenario(scenario_);
  if (!errors.empty()) {
    throw std::invalid_argument("invalid scenario: " + errors.front());
  }
  ticks_per_cycle_ = static_cast<int>(std::llround(scenario_.replan_period / scenario_.tick));
  total_ticks_ = static_cast<int>(std::llround(scenario_.duration / scenario_.tick));
  agents_.resize(scenario_.agents.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    agents_[i].position = scenario_.agents[i].position;
    agents_[i].velocity = Vec2::Zero();
  }
  record_metrics();
}

WorldSnapshot Simulation::snapshot() const {
  const double t = time();
  WorldSnapshot snap;
  snap.time = t;
  snap.target = {scenario_.target.position(t), scenario_.target.velocity(t),
                 scenario_.target.radius};
  for (const auto& o : scenario_.dynamic_obstacles) {
    snap.obstacles.push_back({o.position(t), o.velocity(t), o.radius});
  }
  for (const auto& a : agents_) snap.agents.push_back({a.position, a.velocity});
  snap.agent_radius = scenario_.agent_radius;
  snap.static_discs = scenario_.static_discs;
  snap.static_boxes = scenario_.static_boxes;
  snap.bounds = scenario_.bounds;
  return snap;
}

void Simulation::replan(int cycle) {
  WorldSnapshot snap = snapshot();
  if (scenario_.measurement_noise > 0.0) {
    // One noisy measurement set per cycle, shared by every agent.
    Rng noise(derive_seed(scenario_.seed, 0x4015E, cycle));
    auto jitter = [&](Vec2& v) {
      v.x() += scenario_.measurement_noise * noise.normal();
      v.y() += scenario_.measurement_noise * noise.normal();
    };
    jitter(snap.target.position);
    jitter(snap.target.velocity);
    for (auto& o : snap.obstacles) {
      jitter(o.position);
      jitter(o.velocity);
    }
  }

  for (std::size_t i = 0; i < agents_.size(); ++i) {
    PlannerConfig cfg = scenario_.planner;
    if (scenario_.agents[i].azimuth_bounds) {
      cfg.sample_azimuth_lo = scenario_.agents[i].azimuth_bounds->first;
      cfg.sample_azimuth_hi = scenario_.agents[i].azimuth_bounds->second;
    }
    const std::uint64_t seed = derive_seed(scenario_.seed, cycle, i);
    const PlanResult res = plan(snap, static_cast<int>(i), cfg, seed, options_.threads);

    PlanLogEntry log{cycle,
                     time(),
                     static_cast<int>(i),
                     res.trajectory.has_value(),
                     res.report.passed(),
                     res.report.counts,
                     res.wall_time_ms,
                     res.selected_cost,
                     res.diagnostic};
    plan_log_.push_back(std::move(log));

    if (res.trajectory) {
      agents_[i].curve = *res.trajectory;
      agents_[i].curve_velocity = res.trajectory->derivative();
      agents_[i].curve_start = time();
      agents_[i].has_curve = true;
      if (options_.record_trajectories) {
        trajectory_log_.push_back({cycle, time(), static_cast<int>(i), *res.trajectory});
      }
    }
    // On failure the agent keeps executing its previous trajectory; once that
    // is exhausted it hovers at the endpoint (handled during integration).
  }
}

void Simulation::record_metrics() {
  std::vector<Vec2> pos;
  pos.reserve(agents_.size());
  for (const auto& a : agents_) pos.push_back(a.position);
  std::vector<Disc> moving;
  moving.reserve(scenario_.dynamic_obstacles.size());
  const double t = time();
  for (const auto& o : scenario_.dynamic_obstacles) moving.push_back({o.position(t), o.radius});
  metrics_.push_back(compute_metrics(
      t, WorldGeometry{pos, scenario_.agent_radius, scenario_.target.position(t),
                       scenario_.target.radius, moving, scenario_.static_discs,
                       scenario_.static_boxes}));
  if (options_.stop_on_failure) {
    const MetricsRecord& m = metrics_.back();
    if (m.chi1 <= 0.0 || m.chi2 <= 0.0 || m.chi3 <= 0.0 || m.phi1 <= 0.0 || m.phi2 <= 0.0) {
      halted_ = true;
    }
  }
}

bool Simulation::step() {
  if (halted_ || tick_index_ >= total_ticks_) return false;
  if (tick_index_ % ticks_per_cycle_ == 0) {
    replan(tick_index_ / ticks_per_cycle_);
  }
  ++tick_index_;
  const double t = time();
  for (auto& a : agents_) {
    if (!a.has_curve) continue;  // never planned: hold position
    const double local = t - a.curve_start;
    if (local <= a.curve.horizon()) {
      a.position = a.curve.evaluate(local);
      a.velocity = a.curve_velocity.evaluate(local);
    } else {
      a.position = a.curve.back();
      a.velocity = Vec2::Zero();
    }
  }
  record_metrics();
  return !(halted_ || tick_index_ >= total_ticks_);
}

void Simulation::run() {
  while (step()) {
  }
}

void Simulation::write_metrics_csv(std::ostream& os) const {
  os << "t,chi1,chi2,chi3,phi1,phi2\n";
  for (const MetricsRecord& m : metrics_) {
    fmt(os, "%.4f", m.t);
    for (double v : {m.chi1, m.chi2, m.chi3, m.phi1, m.phi2}) {
      os << ',';
      fmt(os, "%.9g", v);
    }
    os << '\n';
  }
}

void Simulation::write_plan_log_csv(std::ostream& os) const {
  os << "cycle,t,agent,status,samples_passed,wall_ms,cost";
  for (int k = 0; k < kCheckTagCount; ++k) {
    os << ',' << check_tag_name(static_cast<CheckTag>(k));
  }
  os << ",diagnostic\n";
  for (const PlanLogEntry& e : plan_log_) {
    os << e.cycle << ',';
    fmt(os, "%.4f", e.t);
    os << ',' << e.agent << ',' << (e.planned ? "planned" : "kept") << ',' << e.samples_passed
       << ',';
    fmt(os, "%.6g", e.wall_ms);
    os << ',';
    fmt(os, "%.9g", e.planned ? e.cost : 0.0);
    for (int k = 0; k < kCheckTagCount; ++k) os << ',' << e.fail_counts[k];
    os << ',' << e.diagnostic << '\n';
  }
}

void Simulation::write_trajectory_csv(std::ostream& os) const {
  os << "cycle,t,agent,horizon,degree,coefficients...\n";
  for (const TrajectoryLogEntry& e : trajectory_log_) {
    os << e.cycle << ',';
    fmt(os, "%.4f", e.t);
    os << ',' << e.agent << ',';
    fmt(os, "%.17g", e.curve.horizon());
    os << ',' << e.curve.degree();
    for (const Vec2& p : e.curve.control_points()) {
      os << ',';
      fmt(os, "%.17g", p.x());
      os << ',';
      fmt(os, "%.17g", p.y());
    }
    os << '\n';
  }
}

}  // namespace mtrack
