#include "mtrack/planner.hpp"

#include "mtrack/parallel.hpp"

#include <chrono>
#include <cmath>

namespace mtrack {

namespace {

constexpr int kMaxWindows = 16;

double sq(double x) { return x * x; }

bool points_inside(std::span<const Vec2> pts, const std::vector<HalfPlane>& planes) {
  for (const HalfPlane& hp : planes) {
    for (const Vec2& p : pts) {
      if (hp.signed_distance(p) > 0.0) return false;
    }
  }
  return true;
}

struct Pieces {
  std::array<PlanarCurve, kMaxWindows> piece;
  int count = 0;
};

Pieces split_at_breakpoints(const PlanarCurve& prim, const std::vector<double>& breakpoints) {
  Pieces out;
  out.count = static_cast<int>(breakpoints.size()) + 1;
  PlanarCurve rest = prim;
  double consumed = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    auto [left, right] = rest.split_at(breakpoints[i] - consumed);
    out.piece[i] = left;
    rest = right;
    consumed = breakpoints[i];
  }
  out.piece[out.count - 1] = rest;
  return out;
}

// Split primitives are checked window by window against the corridor regions.
bool pieces_inside(const Pieces& pieces, const std::vector<std::vector<HalfPlane>>& planes) {
  for (int m = 0; m < pieces.count; ++m) {
    if (!points_inside(pieces.piece[m].control_points(), planes[m])) return false;
  }
  return true;
}

// Line-of-sight certificate against one occluder. `collision_certified` lets
// the caller skip the body-separation term when the body-collision
// certificate for this occluder has already passed (it is at least as strong
// in both modes).
bool occlusion_certified(const CheckInputs& in, const PlanarCurve& prim,
                         const CheckInputs::Occluder& occ, bool collision_certified) {
  const double ro = occ.radius;
  if (in.visibility_mode == VisibilityMode::relaxed) {
    // Endpoint terms tightened to the body radii, middle term relaxed.
    if (occ.target_gap_min_coeff < sq(ro + in.target_radius)) return false;
    if (!collision_certified) {
      const PlanarCurve e = difference(prim, occ.prediction);
      if (min_coefficient(dot(e, e)) < sq(ro + in.agent_radius)) return false;
    }
    const PlanarCurve e = difference(prim, occ.prediction);
    const ScalarCurve p2 = dot(e, occ.target_offset);
    const double bound = sq(ro) - sq(ro + std::min(in.target_radius, in.agent_radius));
    return min_coefficient(p2) >= bound;
  }
  // Conservative mode: all three terms against the bare occluder radius.
  if (occ.target_gap_min_coeff < sq(ro)) return false;
  const PlanarCurve e = difference(prim, occ.prediction);
  if (!collision_certified && min_coefficient(dot(e, e)) < sq(ro)) return false;
  const ScalarCurve p2 = dot(e, occ.target_offset);
  return min_coefficient(p2) >= sq(ro);
}

}  // namespace

const char* check_tag_name(CheckTag tag) {
  switch (tag) {
    case CheckTag::passed: return "passed";
    case CheckTag::corridor_visibility: return "corridor_visibility";
    case CheckTag::corridor_safety: return "corridor_safety";
    case CheckTag::distance_min: return "distance_min";
    case CheckTag::distance_max: return "distance_max";
    case CheckTag::dynamic_collision: return "dynamic_collision";
    case CheckTag::target_collision: return "target_collision";
    case CheckTag::dbvc: return "dbvc";
    case CheckTag::divc: return "divc";
    case CheckTag::dynamic_occlusion: return "dynamic_occlusion";
    case CheckTag::vel_limit: return "vel_limit";
    case CheckTag::acc_limit: return "acc_limit";
    case CheckTag::yaw_limit: return "yaw_limit";
  }
  return "unknown";
}

void PlannerConfig::validate(double target_radius, double agent_radius) const {
  auto bad = [](const std::string& why) { throw std::invalid_argument("PlannerConfig: " + why); };
  if (sample_count < 1) bad("sample_count must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) bad("horizon must be positive");
  if (corridor_windows < 1 || corridor_windows > kMaxWindows) bad("corridor_windows out of range");
  if (!(d_min >= target_radius + agent_radius)) {
    bad("d_min must be at least target_radius + agent_radius");
  }
  if (!(d_min < d_max)) bad("d_min must be below d_max");
  if (!(sample_radius_lo > 0.0) || !(sample_radius_lo <= sample_radius_hi)) {
    bad("sampling annulus must satisfy 0 < lo <= hi");
  }
  if (!(sample_azimuth_lo <= sample_azimuth_hi)) bad("azimuth bounds out of order");
  if (!(v_max > 0.0) || !(a_max > 0.0) || !(yaw_rate_max > 0.0)) bad("limits must be positive");
  if (jerk_weight < 0.0) bad("jerk_weight must be nonnegative");
  if (prediction_degree < 1 || prediction_degree > 8) bad("prediction_degree out of range");
}

CheckInputs prepare_check_inputs(const WorldSnapshot& snapshot, int agent_id,
                                 const PlannerConfig& config) {
  if (agent_id < 0 || agent_id >= static_cast<int>(snapshot.agents.size())) {
    throw std::invalid_argument("prepare_check_inputs: agent_id out of range");
  }
  const double T = config.horizon;
  CheckInputs in;
  in.horizon = T;
  in.agent_radius = snapshot.agent_radius;
  in.target_radius = snapshot.target.radius;
  in.target_prediction = predict_constant_velocity(snapshot.target, T, config.prediction_degree);
  in.visibility_mode = config.visibility_mode;
  in.d_min2 = sq(config.d_min);
  in.d_max2 = sq(config.d_max);
  in.v_max2 = sq(config.v_max);
  in.a_max2 = sq(config.a_max);
  in.yaw_rate_max = config.yaw_rate_max;

  auto add_occluder = [&](const MovingObjectState& state, bool collision, bool occlusion) {
    const PlanarCurve pred = predict_constant_velocity(state, T, config.prediction_degree);
    const PlanarCurve off = difference(in.target_prediction, pred);
    CheckInputs::Occluder occ{pred, state.radius, collision, occlusion, off,
                              min_coefficient(dot(off, off))};
    in.occluders.push_back(std::move(occ));
  };

  for (const MovingObjectState& obs : snapshot.obstacles) add_occluder(obs, true, true);

  // Cells translate with the prediction; the static ablation freezes the
  // anchor at the measured target position.
  const Vec2 self = snapshot.agents[agent_id].position;
  const PlanarCurve anchor =
      config.cell_mode == CellMode::static_cells
          ? PlanarCurve::constant(snapshot.target.position, T, config.prediction_degree)
          : in.target_prediction;
  for (int j = 0; j < static_cast<int>(snapshot.agents.size()); ++j) {
    if (j == agent_id) continue;
    const WorldAgentState& peer = snapshot.agents[j];
    if (config.cell_mode == CellMode::no_cells) {
      add_occluder({peer.position, peer.velocity, snapshot.agent_radius}, true, true);
      continue;
    }
    in.dbvc.push_back(build_dbvc(self, peer.position, anchor, snapshot.agent_radius));
    DivcPair pair = build_divc(self, peer.position, anchor, snapshot.agent_radius,
                               config.alpha_policy);
    if (pair.case_tag == DivcCase::fallback) {
      add_occluder({peer.position, peer.velocity, snapshot.agent_radius}, false, true);
    }
    in.divc.push_back(std::move(pair));
  }

  CorridorResult cr =
      build_corridor(self, in.target_prediction, snapshot.static_discs, snapshot.static_boxes,
                     config.corridor_windows, snapshot.bounds, snapshot.agent_radius, config.d_max);
  if (!cr.ok()) {
    in.corridor_ok = false;
    in.corridor_failure = cr.failure;
    return in;
  }
  in.breakpoints = cr.corridor->interior_breakpoints();
  for (const CorridorSegment& seg : cr.corridor->segments) {
    in.window_planes.emplace_back(seg.region.halfplanes().begin(), seg.region.halfplanes().end());
    const auto eroded = seg.region.eroded(snapshot.agent_radius);
    if (!eroded) {
      in.corridor_ok = false;
      in.corridor_failure = "corridor window too narrow for agent radius";
      return in;
    }
    in.eroded_planes.emplace_back(eroded->halfplanes().begin(), eroded->halfplanes().end());
  }
  in.corridor_ok = true;
  return in;
}

PlanarCurve solve_min_effort_primitive(const Vec2& x0, const Vec2& v0, const Vec2& xf, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_min_effort_primitive: T must be positive");
  const Vec2 p1 = x0 + (T / 3.0) * v0;
  return PlanarCurve({x0, p1, 0.5 * (p1 + xf), xf}, T);
}

std::vector<Vec2> sample_terminal_points(const PlanarCurve& target_prediction,
                                         const PlannerConfig& config, Rng& rng) {
  std::vector<Vec2> points;
  points.reserve(config.sample_count);
  const Vec2 end = target_prediction.back();
  for (int i = 0; i < config.sample_count; ++i) {
    const double r = rng.uniform(config.sample_radius_lo, config.sample_radius_hi);
    const double psi = rng.uniform(config.sample_azimuth_lo, config.sample_azimuth_hi);
    points.emplace_back(end.x() + r * std::cos(psi), end.y() + r * std::sin(psi));
  }
  return points;
}

CheckTag check_collision(const CheckInputs& in, const PlanarCurve& prim) {
  if (!in.corridor_ok) return CheckTag::corridor_safety;
  const Pieces pieces = split_at_breakpoints(prim, in.breakpoints);
  if (!pieces_inside(pieces, in.eroded_planes)) return CheckTag::corridor_safety;
  for (const auto& occ : in.occluders) {
    if (!occ.in_collision_check) continue;
    const PlanarCurve e = difference(prim, occ.prediction);
    if (min_coefficient(dot(e, e)) < sq(in.agent_radius + occ.radius)) {
      return CheckTag::dynamic_collision;
    }
  }
  const PlanarCurve d = difference(prim, in.target_prediction);
  if (min_coefficient(dot(d, d)) < sq(in.agent_radius + in.target_radius)) {
    return CheckTag::target_collision;
  }
  for (const MovingHalfSpace& hs : in.dbvc) {
    if (min_coefficient(membership_polynomial(hs, prim)) < 0.0) return CheckTag::dbvc;
  }
  return CheckTag::passed;
}

CheckTag check_visibility(const CheckInputs& in, const PlanarCurve& prim) {
  if (!in.corridor_ok) return CheckTag::corridor_visibility;
  const Pieces pieces = split_at_breakpoints(prim, in.breakpoints);
  if (!pieces_inside(pieces, in.window_planes)) return CheckTag::corridor_visibility;
  for (const DivcPair& pair : in.divc) {
    for (const MovingHalfSpace& hs : pair.halves) {
      if (min_coefficient(membership_polynomial(hs, prim)) < 0.0) return CheckTag::divc;
    }
  }
  for (const auto& occ : in.occluders) {
    if (!occ.in_occlusion_check) continue;
    if (!occlusion_certified(in, prim, occ, false)) return CheckTag::dynamic_occlusion;
  }
  return CheckTag::passed;
}

CheckTag check_distance(const CheckInputs& in, const PlanarCurve& prim) {
  const PlanarCurve d = difference(prim, in.target_prediction);
  const ScalarCurve q = dot(d, d);
  if (min_coefficient(q) < in.d_min2) return CheckTag::distance_min;
  if (max_coefficient(q) > in.d_max2) return CheckTag::distance_max;
  return CheckTag::passed;
}

CheckTag check_dynamics(const CheckInputs& in, const PlanarCurve& prim) {
  const PlanarCurve v = prim.derivative();
  if (max_coefficient(dot(v, v)) > in.v_max2) return CheckTag::vel_limit;
  const PlanarCurve a = v.derivative();
  if (max_coefficient(dot(a, a)) > in.a_max2) return CheckTag::acc_limit;

  // Yaw rate, multiplied through by the squared tracking distance D(t).
  // Equivalence needs D > 0, which only the distance certificate provides.
  const PlanarCurve r = difference(in.target_prediction, prim);
  const ScalarCurve den = dot(r, r);
  if (min_coefficient(den) <= 0.0) {
    throw std::logic_error("check_dynamics: distance certificate must pass first");
  }
  const PlanarCurve rd = r.derivative();
  const ScalarCurve num = difference(product(component(r, 0), component(rd, 1)),
                                     product(component(r, 1), component(rd, 0)));
  const ScalarCurve num_e = num.elevated(den.degree());
  for (int k = 0; k <= den.degree(); ++k) {
    const double bound = in.yaw_rate_max * den.point(k);
    if (bound - num_e.point(k) < 0.0 || bound + num_e.point(k) < 0.0) {
      return CheckTag::yaw_limit;
    }
  }
  return CheckTag::passed;
}

CheckTag evaluate_primitive(const CheckInputs& in, const PlanarCurve& prim) {
  if (!in.corridor_ok) return CheckTag::corridor_visibility;
  const Pieces pieces = split_at_breakpoints(prim, in.breakpoints);
  if (!pieces_inside(pieces, in.window_planes)) return CheckTag::corridor_visibility;
  if (!pieces_inside(pieces, in.eroded_planes)) return CheckTag::corridor_safety;

  const PlanarCurve d = difference(prim, in.target_prediction);
  const ScalarCurve q = dot(d, d);
  const double q_lo = min_coefficient(q);
  if (q_lo < in.d_min2) return CheckTag::distance_min;
  if (max_coefficient(q) > in.d_max2) return CheckTag::distance_max;

  for (const auto& occ : in.occluders) {
    if (!occ.in_collision_check) continue;
    const PlanarCurve e = difference(prim, occ.prediction);
    if (min_coefficient(dot(e, e)) < sq(in.agent_radius + occ.radius)) {
      return CheckTag::dynamic_collision;
    }
  }
  if (q_lo < sq(in.agent_radius + in.target_radius)) return CheckTag::target_collision;
  for (const MovingHalfSpace& hs : in.dbvc) {
    if (min_coefficient(membership_polynomial(hs, prim)) < 0.0) return CheckTag::dbvc;
  }

  for (const DivcPair& pair : in.divc) {
    for (const MovingHalfSpace& hs : pair.halves) {
      if (min_coefficient(membership_polynomial(hs, prim)) < 0.0) return CheckTag::divc;
    }
  }
  for (const auto& occ : in.occluders) {
    if (!occ.in_occlusion_check) continue;
    if (!occlusion_certified(in, prim, occ, occ.in_collision_check)) {
      return CheckTag::dynamic_occlusion;
    }
  }

  const PlanarCurve v = prim.derivative();
  if (max_coefficient(dot(v, v)) > in.v_max2) return CheckTag::vel_limit;
  const PlanarCurve a = v.derivative();
  if (max_coefficient(dot(a, a)) > in.a_max2) return CheckTag::acc_limit;
  {
    const PlanarCurve r = difference(in.target_prediction, prim);
    const PlanarCurve rdot = r.derivative();
    const ScalarCurve num = difference(product(component(r, 0), component(rdot, 1)),
                                       product(component(r, 1), component(rdot, 0)));
    const ScalarCurve num_e = num.elevated(q.degree());
    for (int k = 0; k <= q.degree(); ++k) {
      const double bound = in.yaw_rate_max * q.point(k);
      if (bound - num_e.point(k) < 0.0 || bound + num_e.point(k) < 0.0) {
        return CheckTag::yaw_limit;
      }
    }
  }
  return CheckTag::passed;
}

double trajectory_cost(const PlanarCurve& primitive, const PlanarCurve& target_prediction,
                       double jerk_weight, double d_des) {
  const PlanarCurve jerk = primitive.derivative().derivative().derivative();
  const double j1 = jerk_weight * definite_integral(dot(jerk, jerk));
  const PlanarCurve d = difference(primitive, target_prediction);
  const ScalarCurve g = offset(dot(d, d), -sq(d_des));
  const double j2 = definite_integral(product(g, g));
  return j1 + j2;
}

std::optional<std::size_t> select_best(std::span<const PlanarCurve> passing,
                                       const PlanarCurve& target_prediction,
                                       const PlannerConfig& config) {
  std::optional<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < passing.size(); ++i) {
    const double c =
        trajectory_cost(passing[i], target_prediction, config.jerk_weight, config.d_des());
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return best;
}

PlanResult plan(const WorldSnapshot& snapshot, int agent_id, const PlannerConfig& config,
                std::uint64_t seed, int threads) {
  const auto t_begin = std::chrono::steady_clock::now();
  config.validate(snapshot.target.radius, snapshot.agent_radius);

  PlanResult res;
  const CheckInputs in = prepare_check_inputs(snapshot, agent_id, config);
  if (!in.corridor_ok) {
    res.diagnostic = "corridor infeasible: " + in.corridor_failure;
    res.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t_begin)
                           .count();
    return res;
  }

  Rng rng(seed);
  const std::vector<Vec2> terminals = sample_terminal_points(in.target_prediction, config, rng);
  const Vec2 x0 = snapshot.agents[agent_id].position;
  const Vec2 v0 = snapshot.agents[agent_id].velocity;
  const double T = config.horizon;
  const double d_des = config.d_des();

  const int n = static_cast<int>(terminals.size());
  std::vector<CheckTag> tags(n, CheckTag::passed);
  std::vector<double> costs(n, std::numeric_limits<double>::infinity());
  parallel_chunks(n, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const PlanarCurve prim = solve_min_effort_primitive(x0, v0, terminals[i], T);
      tags[i] = evaluate_primitive(in, prim);
      if (tags[i] == CheckTag::passed) {
        costs[i] = trajectory_cost(prim, in.target_prediction, config.jerk_weight, d_des);
      }
    }
  });

  res.report.total = n;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    ++res.report.count(tags[i]);
    if (tags[i] == CheckTag::passed && (best < 0 || costs[i] < costs[best])) best = i;
  }
  if (best >= 0) {
    res.trajectory = solve_min_effort_primitive(x0, v0, terminals[best], T);
    res.selected_index = best;
    res.selected_cost = costs[best];
  } else {
    res.diagnostic = "no feasible primitive";
  }
  res.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return res;
}

}  // namespace mtrack
