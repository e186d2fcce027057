#include "mtrack/cells.hpp"

#include <cmath>

namespace mtrack {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double select_alpha(AlphaPolicy policy, double upper) {
  switch (policy) {
    case AlphaPolicy::min_alpha:
      return 1.0;
    case AlphaPolicy::max_alpha:
      return upper;
    case AlphaPolicy::midpoint:
    default:
      return 0.5 * (1.0 + upper);
  }
}

}  // namespace

ScalarCurve membership_polynomial(const MovingHalfSpace& hs, const PlanarCurve& traj) {
  if (!horizons_match(hs.anchor.horizon(), traj.horizon())) {
    throw std::invalid_argument("membership_polynomial: horizon mismatch");
  }
  const int n = std::max(traj.degree(), hs.anchor.degree());
  const PlanarCurve te = traj.elevated(n);
  const PlanarCurve ae = hs.anchor.elevated(n);
  const double constant = hs.normal.dot(hs.anchor_shift) + hs.static_offset;
  std::array<double, ScalarCurve::kMaxPoints> g;
  for (int k = 0; k <= n; ++k) {
    g[k] = -(hs.normal.dot(te.point(k) - ae.point(k)) + constant);
  }
  return ScalarCurve(std::span<const double>(g.data(), n + 1), traj.horizon());
}

MovingHalfSpace build_dbvc(const Vec2& self_position, const Vec2& other_position,
                           const PlanarCurve& target_prediction, double agent_radius) {
  const Vec2 sep = other_position - self_position;
  const double dist = sep.norm();
  if (dist <= 1e-9) {
    throw std::invalid_argument("build_dbvc: coincident agents");
  }
  MovingHalfSpace hs{sep, agent_radius * dist, target_prediction,
                     target_prediction.front() - 0.5 * (self_position + other_position)};
  return hs;
}

double obtuse_alpha_upper(const Vec2& xcq_i, const Vec2& xcq_j, double agent_radius) {
  const double di = xcq_i.norm();
  const double dj = xcq_j.norm();
  const double dot_n = xcq_i.dot(xcq_j) / (di * dj);
  return std::min(std::min(di, dj) / agent_radius, std::sqrt(2.0 / (1.0 - dot_n)));
}

double acute_alpha_upper(const Vec2& xcq_i, const Vec2& xcq_j, double agent_radius) {
  const double di = xcq_i.norm();
  const double dj = xcq_j.norm();
  const double dot_n = xcq_i.dot(xcq_j) / (di * dj);
  const double det = std::abs(cross2(xcq_i, xcq_j));
  return std::min(det / (agent_radius * std::max(di, dj)), std::sqrt(2.0 * (1.0 + dot_n)));
}

DivcPair build_divc(const Vec2& self_position, const Vec2& other_position,
                    const PlanarCurve& target_prediction, double agent_radius,
                    AlphaPolicy policy) {
  const Vec2 target0 = target_prediction.front();
  const Vec2 xi = self_position - target0;
  const Vec2 xj = other_position - target0;
  const double di = xi.norm();
  const double dj = xj.norm();
  if (di <= 1e-9 || dj <= 1e-9) {
    throw std::invalid_argument("build_divc: target coincident with an agent");
  }
  const Vec2 ni = xi / di;
  const Vec2 nj = xj / dj;

  // Orientation of self relative to the partner's line of sight. Collinear
  // geometry has no well-defined side; hand the pair to the fallback check.
  const double det = cross2(xj, xi);
  if (std::abs(det) <= 1e-12 * di * dj) {
    return DivcPair{DivcCase::fallback, 0.0, {}};
  }
  const double z = det > 0.0 ? 1.0 : -1.0;
  const double theta_j = std::atan2(nj.y(), nj.x());

  const bool obtuse = xi.dot(xj) <= 0.0;
  if (obtuse) {
    const double upper = obtuse_alpha_upper(xi, xj, agent_radius);
    if (upper < 1.0) return DivcPair{DivcCase::fallback, 0.0, {}};
    const double alpha = select_alpha(policy, upper);

    MovingHalfSpace h1{-ni, alpha * agent_radius, target_prediction, Vec2::Zero()};

    const double sin_o = 1.0 / alpha;
    const double cos_o = std::sqrt(std::max(0.0, 1.0 - sin_o * sin_o));
    const double phi = theta_j + z * std::atan2(sin_o, cos_o);
    const Vec2 m(z * std::sin(phi), -z * std::cos(phi));
    MovingHalfSpace h2{m, 0.0, target_prediction, -alpha * agent_radius * ni};

    return DivcPair{DivcCase::obtuse, alpha, {h1, h2}};
  }

  const double upper = acute_alpha_upper(xi, xj, agent_radius);
  if (upper < 1.0) return DivcPair{DivcCase::fallback, 0.0, {}};
  const double alpha = select_alpha(policy, upper);

  MovingHalfSpace h1{z * Vec2(xj.y(), -xj.x()), alpha * agent_radius * dj, target_prediction,
                     Vec2::Zero()};

  const double sin_n = std::abs(cross2(ni, nj));  // sin of the angle between the lines of sight
  const double sin_a = sin_n / alpha;
  const double cos_a = std::sqrt(std::max(0.0, 1.0 - sin_a * sin_a));
  const double phi = theta_j + z * std::atan2(sin_a, cos_a);
  const Vec2 m(z * std::sin(phi), -z * std::cos(phi));
  MovingHalfSpace h2{m, 0.0, target_prediction, -(alpha * agent_radius / sin_n) * ni};

  return DivcPair{DivcCase::acute, alpha, {h1, h2}};
}

}  // namespace mtrack
