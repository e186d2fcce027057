#include "mtrack/corridor.hpp"

#include <array>
#include <cmath>

namespace mtrack {

namespace {

CorridorResult fail(std::string why) { return {std::nullopt, std::move(why)}; }

}  // namespace

CorridorResult build_corridor(const Vec2& agent_position, const PlanarCurve& target_prediction,
                              std::span<const Disc> static_discs,
                              std::span<const AABB> static_boxes, int windows, const AABB& bounds,
                              double agent_radius, double inflate) {
  if (windows < 1) throw std::invalid_argument("build_corridor: windows must be >= 1");
  if (!(inflate > 0.0)) throw std::invalid_argument("build_corridor: inflate must be positive");

  for (const Disc& d : static_discs) {
    if ((agent_position - d.center).norm() <= d.radius + agent_radius) {
      return fail("agent inside inflated static disc");
    }
  }
  for (const AABB& b : static_boxes) {
    if (point_aabb_distance(agent_position, b) <= agent_radius) {
      return fail("agent inside inflated static box");
    }
  }

  const double horizon = target_prediction.horizon();
  Corridor corridor;
  corridor.segments.reserve(windows);

  for (int m = 0; m < windows; ++m) {
    // Parenthesized so the window end never exceeds the horizon by rounding.
    const double t0 = horizon * (static_cast<double>(m) / windows);
    const double t1 = horizon * (static_cast<double>(m + 1) / windows);
    const std::array<Vec2, 4> seeds = {agent_position, target_prediction.evaluate(t0),
                                       target_prediction.evaluate(0.5 * (t0 + t1)),
                                       target_prediction.evaluate(t1)};
    for (const Vec2& s : seeds) {
      if (!bounds.contains(s)) return fail("seed point outside bounds");
    }
    const std::vector<Vec2> hull = convex_hull(seeds);

    Vec2 lo = seeds[0], hi = seeds[0];
    for (const Vec2& s : seeds) {
      lo = lo.cwiseMin(s);
      hi = hi.cwiseMax(s);
    }
    const AABB base{(lo - Vec2(inflate, inflate)).cwiseMax(bounds.min),
                    (hi + Vec2(inflate, inflate)).cwiseMin(bounds.max)};
    if (!(base.min.x() < base.max.x() && base.min.y() < base.max.y())) {
      return fail("window region empty after bounds clip");
    }
    std::optional<ConvexPolygon> region = ConvexPolygon::from_aabb(base);

    for (const Disc& d : static_discs) {
      const double inflated = d.radius + agent_radius;
      if (region->distance(d.center) > inflated) continue;  // separation inactive
      const Vec2 p = hull_closest_point(hull, d.center);
      const double dist = (p - d.center).norm();
      if (dist <= inflated) return fail("static disc blocks seed hull");
      const Vec2 dir = (p - d.center) / dist;  // from obstacle toward the seeds
      region = region->clipped({-dir, -(dir.dot(d.center) + inflated)});
      if (!region) return fail("window region emptied by disc separation");
    }

    for (const AABB& b : static_boxes) {
      // Quick reject on boxes far from the base region.
      const AABB rb = region->bounding_box();
      const double gx = std::max({0.0, b.min.x() - rb.max.x(), rb.min.x() - b.max.x()});
      const double gy = std::max({0.0, b.min.y() - rb.max.y(), rb.min.y() - b.max.y()});
      if (std::hypot(gx, gy) > agent_radius) continue;
      const ClosestPair cp = hull_aabb_closest(hull, b);
      if (cp.distance <= agent_radius) return fail("static box blocks seed hull");
      const Vec2 dir = (cp.on_first - cp.on_second) / cp.distance;
      region = region->clipped({-dir, -(dir.dot(cp.on_second) + agent_radius)});
      if (!region) return fail("window region emptied by box separation");
    }

    for (const Vec2& s : seeds) {
      if (!region->contains(s, 1e-9)) return fail("seed left region after separation");
    }
    corridor.segments.push_back({t0, t1, std::move(*region)});
  }

  return {std::move(corridor), {}};
}

}  // namespace mtrack
